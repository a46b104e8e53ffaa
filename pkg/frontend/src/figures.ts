/** Pure view models for the figure panels.
 *
 * Everything here is a deterministic function of service responses; the
 * DOM layer only draws what these return. No metric is ever computed
 * client-side — the numbers pass through untouched.
 */

import { viridisCss } from "./color.js";
import type {
  KeywordsResponse,
  LayoutResponse,
  MatrixResponse,
  MetricSeries,
  StoryRow,
} from "./types.js";

// ---------------------------------------------------------------- heatmap

export interface HeatmapModel {
  /** side length in cells: n_agents x n_generations stories */
  n: number;
  nAgents: number;
  nGenerations: number;
  values: number[][];
  /** cell offsets where a generation boundary line is drawn */
  separators: number[];
  colorAt(i: number, j: number): string;
}

export function heatmapModel(matrix: MatrixResponse): HeatmapModel {
  const separators: number[] = [];
  for (let g = 1; g < matrix.n_generations; g++) {
    separators.push(g * matrix.n_agents);
  }
  return {
    n: matrix.n_stories,
    nAgents: matrix.n_agents,
    nGenerations: matrix.n_generations,
    values: matrix.values,
    separators,
    colorAt: (i, j) => viridisCss(matrix.values[i][j]),
  };
}

export interface CellPair {
  row: { index: number; generation: number; agent: number };
  column: { index: number; generation: number; agent: number };
}

/** Which two stories a heatmap cell compares (for the hover panel). */
export function cellToPair(i: number, j: number, nAgents: number): CellPair {
  const place = (index: number) => ({
    index,
    generation: Math.floor(index / nAgents),
    agent: index % nAgents,
  });
  return { row: place(i), column: place(j) };
}

// ----------------------------------------------------------- metric curves

export interface CurvePoint {
  generation: number;
  mean: number;
  lo: number;
  hi: number;
}

export interface CurveModel {
  name: string;
  points: CurvePoint[];
  /** true when every band has zero width (e.g. a single seed) */
  bandCollapsed: boolean;
}

export function curveModel(name: string, series: MetricSeries): CurveModel {
  const points: CurvePoint[] = [];
  let bandCollapsed = true;
  series.mean.forEach((mean, generation) => {
    if (mean === null) {
      return; // undefined at this generation (e.g. successive at g=0)
    }
    const std = series.std[generation] ?? 0;
    const width = std === null ? 0 : std;
    if (width > 0) {
      bandCollapsed = false;
    }
    points.push({
      generation,
      mean,
      lo: mean - width,
      hi: mean + width,
    });
  });
  return { name, points, bandCollapsed };
}

export const SIMILARITY_CURVES = [
  "within_generation_similarity",
  "successive_similarity",
  "first_generation_similarity",
] as const;

// ------------------------------------------------------------- word chains

export interface WordChainRow {
  word: string;
  generations: number[];
  /** consecutive-generation links, as [from, to] pairs */
  links: [number, number][];
}

/** Rows ordered by first appearance, then alphabetically. */
export function wordChainRows(keywords: KeywordsResponse): WordChainRow[] {
  const rows = Object.entries(keywords.word_chains).map(([word, chain]) => ({
    word,
    generations: [...chain.generations],
    links: chain.links.map(([a, b]) => [a, b] as [number, number]),
  }));
  rows.sort((a, b) => {
    const firstA = a.generations[0] ?? Number.POSITIVE_INFINITY;
    const firstB = b.generations[0] ?? Number.POSITIVE_INFINITY;
    if (firstA !== firstB) {
      return firstA - firstB;
    }
    return a.word < b.word ? -1 : a.word > b.word ? 1 : 0;
  });
  return rows;
}

// -------------------------------------------------------------- story graph

export interface GraphNode {
  index: number;
  x: number;
  y: number;
  color: string;
}

export interface GraphEdge {
  source: number;
  target: number;
  weight: number;
  successive: boolean;
}

export interface GraphModel {
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export function graphModel(layout: LayoutResponse): GraphModel {
  return {
    nodes: layout.nodes.map((node) => ({
      index: node.index,
      x: node.x,
      y: node.y,
      color: viridisCss(node.color),
    })),
    edges: layout.edges.map((edge) => ({ ...edge })),
  };
}

// -------------------------------------------------------------- story texts

/** Stories indexed by story_index for O(1) hover lookups. */
export function storiesByIndex(stories: StoryRow[]): Map<number, StoryRow> {
  return new Map(stories.map((story) => [story.story_index, story]));
}
