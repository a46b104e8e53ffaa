/** Perceptually uniform gradient for the layout color scalar.
 *
 * Nine anchor points of the viridis colormap, linearly interpolated.
 * Consecutive stories get consecutive scalars from the service, so
 * nearby stories come out in similar colors.
 */

const ANCHORS: [number, number, number][] = [
  [68, 1, 84],
  [72, 40, 120],
  [62, 74, 137],
  [49, 104, 142],
  [38, 130, 142],
  [31, 158, 137],
  [53, 183, 121],
  [109, 205, 89],
  [253, 231, 37],
];

export function viridis(t: number): [number, number, number] {
  const clamped = Math.min(1, Math.max(0, t));
  const scaled = clamped * (ANCHORS.length - 1);
  const i = Math.min(ANCHORS.length - 2, Math.floor(scaled));
  const frac = scaled - i;
  const a = ANCHORS[i];
  const b = ANCHORS[i + 1];
  return [
    Math.round(a[0] + (b[0] - a[0]) * frac),
    Math.round(a[1] + (b[1] - a[1]) * frac),
    Math.round(a[2] + (b[2] - a[2]) * frac),
  ];
}

export function viridisCss(t: number): string {
  const [r, g, b] = viridis(t);
  return `rgb(${r},${g},${b})`;
}

/** Relative luminance, used to check the gradient stays monotone. */
export function luminance([r, g, b]: [number, number, number]): number {
  return 0.2126 * r + 0.7152 * g + 0.0722 * b;
}
