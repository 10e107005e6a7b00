/** Display helpers for result tables. */

export function formatValue(v: number): string {
  return v.toFixed(2);
}

/** Signed delta with percentage vs. baseline, e.g. "-90.23 (-10.0%)". */
export function formatDelta(delta: number, baseline: number): string {
  const sign = delta > 0 ? "+" : delta < 0 ? "-" : "±";
  const abs = Math.abs(delta).toFixed(2);
  if (baseline === 0) return `${sign}${abs}`;
  const pct = Math.abs((delta / baseline) * 100).toFixed(1);
  return `${sign}${abs} (${sign}${pct}%)`;
}

export function formatSpeedup(pct: number): string {
  return `${pct.toFixed(1)}%`;
}

export function formatDuration(seconds: number): string {
  return seconds >= 1 ? `${seconds.toFixed(2)} s` : `${(seconds * 1000).toFixed(2)} ms`;
}
