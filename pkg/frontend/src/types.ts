/** Wire types of the simulation service. Field names match the JSON exactly. */

export type NetworkKind = "fully_connected" | "circle" | "caveman" | "sequence";

export type BackendKind = "mock" | "http_completion" | "http_chat";

export type MockRule = "echo_first" | "concat_head" | "templated";

export interface BackendSpec {
  kind: BackendKind;
  url: string | null;
  rule: MockRule | null;
  head_words: number;
  bearer_token: string | null;
}

export interface PromptSet {
  name: string;
  initialization: string;
  transformation: string;
}

export type Personalities =
  | { mode: "uniform"; text: string }
  | { mode: "per_agent"; texts: string[] };

export interface GenerationParams {
  max_tokens: number;
  temperature: number;
  timeout: number;
  retries: number;
}

/** The config.json shape: what POST /simulations accepts and
 * GET /simulations/{id}/config returns. */
export interface SimulationConfig {
  name: string;
  n_agents: number;
  n_generations: number;
  n_seeds: number;
  network: { kind: NetworkKind; n_cliques: number | null };
  prompts: PromptSet;
  personalities: Personalities;
  backend: BackendSpec;
  params: GenerationParams;
  parallelism: number;
  rng_seed: number;
  shuffle_neighbor_stories: boolean;
  keyword_count: number;
  embeddings_path: string | null;
}

export type JobState = "pending" | "running" | "done" | "failed";

export interface JobStatus {
  id: string;
  name: string;
  state: JobState;
  seed_index: number | null;
  generation: number | null;
  n_seeds: number;
  n_generations: number;
  error: string | null;
  results_path: string;
}

export interface CreatedJob {
  id: string;
  name: string;
  results_path: string;
}

export interface MetricSeries {
  mean: (number | null)[];
  std: (number | null)[];
}

export interface MetricsResponse {
  name: string;
  n_seeds: number;
  seeds_completed: number[];
  seeds_failed: Record<string, string>;
  grid: { n_generations: number; n_agents: number };
  metrics: Record<string, MetricSeries>;
}

export interface MatrixResponse {
  n_stories: number;
  n_agents: number;
  n_generations: number;
  values: number[][];
}

export interface StoryRow {
  agent_id: number;
  generation: number;
  story_index: number;
  seed: number;
  text: string;
  raw_response: string;
}

export interface KeywordsResponse {
  per_story: { story_index: number; keywords: [string, number][] }[];
  word_chains: Record<string, { generations: number[]; links: [number, number][] }>;
}

export interface LayoutNode {
  index: number;
  x: number;
  y: number;
  color: number;
}

export interface LayoutEdge {
  source: number;
  target: number;
  weight: number;
  successive: boolean;
}

export interface LayoutResponse {
  n_nodes: number;
  nodes: LayoutNode[];
  edges: LayoutEdge[];
}

export interface TopologyPreview {
  kind: NetworkKind;
  n_agents: number;
  n_cliques?: number;
  edges: [number, number][];
}

export type PromptRole = "initialization" | "transformation" | "any";

export interface PromptEntry {
  name: string;
  text: string;
  role: PromptRole;
}

export interface PersonalityEntry {
  name: string;
  text: string;
}
