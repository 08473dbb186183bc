/** Deterministic axis scales; all pixel output is rounded to fixed precision
 * so rendering identical inputs yields byte-identical documents. */

export interface Scale {
  (v: number): number;
  ticks(): number[];
}

export function px(v: number): string {
  // fixed two-decimal output, normalizing negative zero
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const f = ((v: number) => outLo + ((v - lo) / (hi - lo)) * (outHi - outLo)) as Scale;
  f.ticks = () => {
    const span = hi - lo;
    const raw = span / 6;
    const mag = Math.pow(10, Math.floor(Math.log10(raw)));
    const norm = raw / mag;
    const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
    const out: number[] = [];
    for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12; t += step) {
      out.push(Math.abs(t) < step / 1e6 ? 0 : t);
    }
    return out;
  };
  return f;
}

export function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const f = ((v: number) => outLo + ((Math.log10(v) - llo) / (lhi - llo)) * (outHi - outLo)) as Scale;
  f.ticks = () => {
    const out: number[] = [];
    for (let d = Math.ceil(llo - 1e-9); d <= Math.floor(lhi + 1e-9); d++) {
      out.push(Math.pow(10, d));
    }
    return out;
  };
  return f;
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) {
    return String(Number(v.toPrecision(6)));
  }
  const exp = Math.round(Math.log10(a));
  return `1e${exp}`;
}
