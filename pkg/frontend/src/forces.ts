/** Client-side force layout for the topology preview.
 *
 * Standard Fruchterman-Reingold on the unweighted preview graph: the
 * server is not involved (previews must work before any run exists).
 * Seeded so a given form state always draws the same picture.
 */

export interface PreviewLayout {
  /** positions scaled to [-1, 1] on both axes */
  positions: [number, number][];
  edges: [number, number][];
}

/** Deterministic 32-bit PRNG (mulberry32). */
export function seededRandom(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function previewLayout(
  nNodes: number,
  edges: [number, number][],
  options: { iterations?: number; seed?: number } = {},
): PreviewLayout {
  const { iterations = 150, seed = 1 } = options;
  if (nNodes === 0) {
    return { positions: [], edges: [] };
  }
  const rand = seededRandom(seed);
  const x = new Float64Array(nNodes);
  const y = new Float64Array(nNodes);
  for (let i = 0; i < nNodes; i++) {
    x[i] = rand();
    y[i] = rand();
  }
  if (nNodes === 1) {
    return { positions: [[0, 0]], edges: [] };
  }

  const k = Math.sqrt(1 / nNodes);
  let temperature = 0.1;
  const cooling = temperature / (iterations + 1);

  const dx = new Float64Array(nNodes);
  const dy = new Float64Array(nNodes);
  for (let step = 0; step < iterations; step++) {
    dx.fill(0);
    dy.fill(0);
    // repulsion between every pair
    for (let i = 0; i < nNodes; i++) {
      for (let j = i + 1; j < nNodes; j++) {
        let ex = x[i] - x[j];
        let ey = y[i] - y[j];
        let dist = Math.hypot(ex, ey);
        if (dist < 0.01) {
          dist = 0.01;
          ex = 0.01;
          ey = 0;
        }
        const repulse = (k * k) / (dist * dist);
        dx[i] += (ex / dist) * repulse * dist;
        dy[i] += (ey / dist) * repulse * dist;
        dx[j] -= (ex / dist) * repulse * dist;
        dy[j] -= (ey / dist) * repulse * dist;
      }
    }
    // attraction along edges
    for (const [a, b] of edges) {
      let ex = x[a] - x[b];
      let ey = y[a] - y[b];
      let dist = Math.hypot(ex, ey);
      if (dist < 0.01) {
        dist = 0.01;
        ex = 0.01;
        ey = 0;
      }
      const attract = (dist * dist) / k;
      dx[a] -= (ex / dist) * attract;
      dy[a] -= (ey / dist) * attract;
      dx[b] += (ex / dist) * attract;
      dy[b] += (ey / dist) * attract;
    }
    for (let i = 0; i < nNodes; i++) {
      const length = Math.max(Math.hypot(dx[i], dy[i]), 1e-12);
      const capped = Math.min(length, temperature);
      x[i] += (dx[i] / length) * capped;
      y[i] += (dy[i] / length) * capped;
    }
    temperature -= cooling;
  }

  // center and scale uniformly into [-1, 1]^2
  let meanX = 0;
  let meanY = 0;
  for (let i = 0; i < nNodes; i++) {
    meanX += x[i] / nNodes;
    meanY += y[i] / nNodes;
  }
  let span = 1e-12;
  for (let i = 0; i < nNodes; i++) {
    x[i] -= meanX;
    y[i] -= meanY;
    span = Math.max(span, Math.abs(x[i]), Math.abs(y[i]));
  }
  const positions: [number, number][] = [];
  for (let i = 0; i < nNodes; i++) {
    positions.push([x[i] / span, y[i] / span]);
  }
  return { positions, edges };
}
