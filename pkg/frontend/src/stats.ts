// Client-side reimplementation of the equal-count shingles and the global
// diverging percentile classing, kept operation-for-operation identical to
// the exporter so the cross-component parity tests can compare exact
// values, not approximations.

export interface Shingle {
  lower: number;
  upper: number;
  memberIndices: number[];
}

export const roundHalfUp = (x: number): number => Math.floor(x + 0.5);

const stableArgsort = (values: number[]): number[] => {
  const order = values.map((_, i) => i);
  // Array.prototype.sort is stable, so ties keep input order
  order.sort((a, b) => values[a] - values[b]);
  return order;
};

export const equalCountShingles = (
  values: number[],
  k: number,
  overlap: number,
): Shingle[] => {
  const n = values.length;
  if (k < 1) {
    throw new RangeError(`k must be >= 1, got ${k}`);
  }
  if (!(overlap >= 0 && overlap < 1)) {
    throw new RangeError(`overlap must lie in [0, 1), got ${overlap}`);
  }
  if (n < k) {
    throw new RangeError(`need n >= k, got n = ${n}, k = ${k}`);
  }
  const r = n / (k * (1 - overlap) + overlap);
  if (r < 1) {
    throw new RangeError(`infeasible shingles: target count ${r} below 1`);
  }
  const order = stableArgsort(values);
  const advance = r * (1 - overlap);
  const shingles: Shingle[] = [];
  for (let i = 0; i < k; i++) {
    const start = roundHalfUp(i * advance);
    const end = Math.min(roundHalfUp(i * advance + r), n);
    const members = order.slice(start, end);
    let lower = Infinity;
    let upper = -Infinity;
    for (const m of members) {
      if (values[m] < lower) lower = values[m];
      if (values[m] > upper) upper = values[m];
    }
    members.sort((a, b) => a - b);
    shingles.push({ lower, upper, memberIndices: members });
  }
  return shingles;
};

// linear interpolation between closest ranks, matching the exporter's
// percentile definition: h = (n - 1) q, value = a[lo] + (a[hi] - a[lo]) frac
const percentileLinear = (sortedAsc: number[], q: number): number => {
  const n = sortedAsc.length;
  const h = (n - 1) * (q / 100);
  const lo = Math.floor(h);
  const hi = Math.min(lo + 1, n - 1);
  return sortedAsc[lo] + (sortedAsc[hi] - sortedAsc[lo]) * (h - lo);
};

export interface DivergingScale {
  classes: number[];
  cuts: number[];
  rates: number[];
}

export const divergingPercentileScale = (
  values: number[],
  reciprocal: boolean,
): DivergingScale => {
  let rates: number[];
  if (reciprocal) {
    if (values.some((v) => v === 0)) {
      throw new RangeError('reciprocal scale hit a zero value');
    }
    rates = values.map((v) => 1 / v);
  } else {
    rates = values.slice();
  }
  if (new Set(rates).size < 2) {
    throw new RangeError('diverging scale needs >= 2 distinct values');
  }
  const sorted = rates.slice().sort((a, b) => a - b);
  const cuts: number[] = [];
  for (let q = 20; q <= 80; q += 10) {
    cuts.push(percentileLinear(sorted, q));
  }
  // ties sit in the lower class: only strictly greater rates move up
  const classes = rates.map(
    (rate) => 1 + cuts.reduce((acc, cut) => acc + (rate > cut ? 1 : 0), 0),
  );
  return { classes, cuts, rates };
};

export const median = (values: number[]): number => {
  const sorted = values.slice().sort((a, b) => a - b);
  const n = sorted.length;
  const mid = Math.floor(n / 2);
  if (n % 2 === 1) {
    return sorted[mid];
  }
  return (sorted[mid - 1] + sorted[mid]) / 2;
};
