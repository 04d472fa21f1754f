/** Visual scaling helpers. Both maps are monotone in the count, so bigger
 * counts always render at least as large/dark as smaller ones. */

const MIN_FONT_PX = 11;
const MAX_FONT_PX = 34;

/** Square-root scaling keeps long-tail terms legible next to giants. */
export function tagFontSize(count: number, maxCount: number): number {
  if (count <= 0 || maxCount <= 0) return MIN_FONT_PX;
  const ratio = Math.sqrt(Math.min(count, maxCount) / maxCount);
  return Math.round(MIN_FONT_PX + (MAX_FONT_PX - MIN_FONT_PX) * ratio);
}

/** Cell shading as an alpha in [0.08, 1]; zero cells stay transparent. */
export function heatAlpha(count: number, maxCount: number): number {
  if (count <= 0 || maxCount <= 0) return 0;
  return 0.08 + 0.92 * (Math.min(count, maxCount) / maxCount);
}

export function heatColor(count: number, maxCount: number): string {
  return `rgba(180, 60, 30, ${heatAlpha(count, maxCount).toFixed(3)})`;
}
