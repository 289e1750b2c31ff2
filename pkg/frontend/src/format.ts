// printf-style %g formatting: `precision` significant digits, trailing
// zeros stripped, exponent form when the decimal exponent leaves
// [-4, precision). Used at 9 digits to compare against the exporter's
// report numbers and at 4 digits for tooltips.
export const formatG = (x: number, precision: number): string => {
  if (!Number.isFinite(x)) {
    throw new RangeError(`cannot format non-finite value ${x}`);
  }
  if (x === 0) {
    return '0';
  }
  const exponential = x.toExponential(precision - 1);
  const [mantissa, expPart] = exponential.split('e');
  const exp = parseInt(expPart, 10);
  if (exp < -4 || exp >= precision) {
    const m = mantissa.includes('.')
      ? mantissa.replace(/0+$/, '').replace(/\.$/, '')
      : mantissa;
    const sign = exp < 0 ? '-' : '+';
    const digits = String(Math.abs(exp)).padStart(2, '0');
    return `${m}e${sign}${digits}`;
  }
  const fixed = x.toFixed(Math.max(0, precision - 1 - exp));
  if (!fixed.includes('.')) {
    return fixed;
  }
  return fixed.replace(/0+$/, '').replace(/\.$/, '');
};

export const formatG9 = (x: number): string => formatG(x, 9);

export const formatSig4 = (x: number): string => formatG(x, 4);
