import { describe, expect, it } from 'vitest';

import {
  divergingPercentileScale,
  equalCountShingles,
  median,
  roundHalfUp,
} from '../src/stats.js';
import { loadBundle } from './helpers.js';

describe('roundHalfUp', () => {
  it('rounds halves toward positive infinity', () => {
    expect(roundHalfUp(0.5)).toBe(1);
    expect(roundHalfUp(1.5)).toBe(2);
    expect(roundHalfUp(2.5)).toBe(3);
    expect(roundHalfUp(-0.5)).toBe(0);
    expect(roundHalfUp(2.4)).toBe(2);
  });
});

describe('equalCountShingles', () => {
  it('returns a single all-member shingle for k=1', () => {
    const values = [5, 1, 4, 2, 3];
    const [only] = equalCountShingles(values, 1, 0.25);
    expect(only.memberIndices).toEqual([0, 1, 2, 3, 4]);
    expect(only.lower).toBe(1);
    expect(only.upper).toBe(5);
  });

  it('splits evenly at zero overlap', () => {
    const values = [...Array(10).keys()].map((i) => i * 2);
    const [a, b] = equalCountShingles(values, 2, 0);
    expect(a.memberIndices).toEqual([0, 1, 2, 3, 4]);
    expect(b.memberIndices).toEqual([5, 6, 7, 8, 9]);
    expect(a.upper).toBeLessThan(b.lower);
  });

  it('gives 45-member shingles with a 4-member overlap on the fixture', () => {
    const bundle = loadBundle();
    const values = bundle.variables['Literacy'].values;
    const [a, b] = equalCountShingles(values, 2, 0.1);
    expect(a.memberIndices.length).toBe(45);
    expect(b.memberIndices.length).toBe(45);
    const inA = new Set(a.memberIndices);
    const shared = b.memberIndices.filter((m) => inA.has(m));
    expect(shared.length).toBe(4);
  });

  it('covers every observation at least once', () => {
    const values = [...Array(37).keys()].map((i) => Math.sin(i) * 10);
    for (const k of [1, 2, 3]) {
      for (const overlap of [0, 0.1, 0.3, 0.5]) {
        const shingles = equalCountShingles(values, k, overlap);
        const seen = new Set<number>();
        for (const sh of shingles) {
          sh.memberIndices.forEach((m) => seen.add(m));
          for (const m of sh.memberIndices) {
            expect(values[m]).toBeGreaterThanOrEqual(sh.lower);
            expect(values[m]).toBeLessThanOrEqual(sh.upper);
          }
        }
        expect(seen.size).toBe(values.length);
      }
    }
  });

  it('rejects bad parameters', () => {
    expect(() => equalCountShingles([1, 2, 3], 0, 0.1)).toThrow(RangeError);
    expect(() => equalCountShingles([1, 2, 3], 2, 1.0)).toThrow(RangeError);
    expect(() => equalCountShingles([1, 2], 3, 0.1)).toThrow(RangeError);
  });
});

describe('divergingPercentileScale', () => {
  it('classes 1..100 into sizes 20,10,...,10,20', () => {
    const values = [...Array(100).keys()].map((i) => i + 1);
    const { classes } = divergingPercentileScale(values, false);
    const sizes = [...Array(8).keys()].map(
      (c) => classes.filter((x) => x === c + 1).length,
    );
    expect(sizes).toEqual([20, 10, 10, 10, 10, 10, 10, 20]);
  });

  it('sends extremes to classes 1 and 8', () => {
    const values = [...Array(50).keys()].map((i) => i * 3 + 1);
    const { classes } = divergingPercentileScale(values, false);
    expect(classes[0]).toBe(1);
    expect(classes[49]).toBe(8);
  });

  it('keeps ties in the lower class', () => {
    const values = [...Array(100).keys()].map((i) => i + 1);
    const { classes, cuts } = divergingPercentileScale(values, false);
    values.forEach((v, i) => {
      if (cuts.includes(v)) {
        expect(classes[i]).toBe(1 + cuts.filter((c) => v > c).length);
      }
    });
  });

  it('reciprocal classing flips the direction', () => {
    const values = [...Array(40).keys()].map((i) => i + 1);
    const plain = divergingPercentileScale(values, false);
    const flipped = divergingPercentileScale(values, true);
    expect(plain.classes[0]).toBe(1);
    expect(flipped.classes[0]).toBe(8);
    expect(() => divergingPercentileScale([0, 1, 2], true)).toThrow(RangeError);
  });

  it('rejects constant input', () => {
    expect(() => divergingPercentileScale([7, 7, 7, 7], false)).toThrow(
      RangeError,
    );
  });
});

describe('median', () => {
  it('matches odd and even definitions', () => {
    expect(median([3, 1, 2])).toBe(2);
    expect(median([4, 1, 3, 2])).toBe(2.5);
    expect(median([10])).toBe(10);
  });
});
