import { describe, expect, it } from 'vitest';

import { formatG9, formatSig4 } from '../src/format.js';

describe('formatG9', () => {
  it('drops trailing zeros on round values', () => {
    expect(formatG9(8520)).toBe('8520');
    expect(formatG9(7759.5)).toBe('7759.5');
    expect(formatG9(0)).toBe('0');
  });

  it('uses exponent form outside the fixed range', () => {
    expect(formatG9(1.55435887e-7)).toBe('1.55435887e-07');
    expect(formatG9(2.0679515313825692e-25)).toBe('2.06795153e-25');
    expect(formatG9(1554358870)).toBe('1.55435887e+09');
  });

  it('keeps nine significant digits in fixed form', () => {
    expect(formatG9(10.2877859)).toBe('10.2877859');
    expect(formatG9(-0.368950312)).toBe('-0.368950312');
    expect(formatG9(0.0001)).toBe('0.0001');
  });

  it('rejects non-finite input', () => {
    expect(() => formatG9(Infinity)).toThrow(RangeError);
    expect(() => formatG9(NaN)).toThrow(RangeError);
  });
});

describe('formatSig4', () => {
  it('limits to four significant digits', () => {
    expect(formatSig4(37)).toBe('37');
    expect(formatSig4(35.68)).toBe('35.68');
    expect(formatSig4(12346)).toBe('1.235e+04');
    expect(formatSig4(0.123456)).toBe('0.1235');
  });
});
