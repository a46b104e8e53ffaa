/** Form state and client-side validation.
 *
 * The rules here mirror the service's config invariants exactly, so a
 * form that passes validation is never rejected with a 400 — and an
 * invalid one is blocked before any request leaves the browser.
 */

import type {
  BackendKind,
  MockRule,
  NetworkKind,
  Personalities,
  SimulationConfig,
} from "./types.js";

export interface ExperimentForm {
  name: string;
  agents: number;
  generations: number;
  seeds: number;
  network: NetworkKind;
  cliques: number | null;
  promptsName: string;
  initialization: string;
  transformation: string;
  personalityMode: "uniform" | "per_agent";
  personalityText: string;
  personalityTexts: string[];
  backendKind: BackendKind;
  backendUrl: string;
  mockRule: MockRule;
  headWords: number;
  bearerToken: string;
  maxTokens: number;
  temperature: number;
  timeout: number;
  retries: number;
  parallelism: number;
  rngSeed: number;
  shuffleNeighbors: boolean;
  keywordCount: number;
  embeddingsPath: string;
}

export function defaultForm(): ExperimentForm {
  return {
    name: "run-1",
    agents: 10,
    generations: 10,
    seeds: 1,
    network: "fully_connected",
    cliques: null,
    promptsName: "TellMeAStory+CombineTwo",
    initialization: "Tell me a story",
    transformation: "",
    personalityMode: "uniform",
    personalityText: "",
    personalityTexts: [],
    backendKind: "mock",
    backendUrl: "",
    mockRule: "templated",
    headWords: 3,
    bearerToken: "",
    maxTokens: 1024,
    temperature: 1.0,
    timeout: 120,
    retries: 2,
    parallelism: 4,
    rngSeed: 0,
    shuffleNeighbors: false,
    keywordCount: 10,
    embeddingsPath: "",
  };
}

const SAFE_NAME = /^[A-Za-z0-9][A-Za-z0-9._-]*$/;
const MOCK_RULES: MockRule[] = ["echo_first", "concat_head", "templated"];

/** All violations, in form order; an empty array means submittable. */
export function validateForm(form: ExperimentForm): string[] {
  const errors: string[] = [];
  if (!SAFE_NAME.test(form.name)) {
    errors.push("run name must be a safe folder name (letters, digits, '.', '_', '-')");
  }
  if (!Number.isInteger(form.agents) || form.agents < 1) {
    errors.push("agents must be a positive integer");
  } else if (form.network === "fully_connected" && form.agents < 2) {
    errors.push("a fully connected network needs at least 2 agents");
  } else if (form.network === "circle" && form.agents < 3) {
    errors.push("a circle needs at least 3 agents");
  }
  if (form.network === "caveman") {
    const c = form.cliques;
    if (c === null || !Number.isInteger(c) || c < 2) {
      errors.push("a caveman network needs at least 2 cliques");
    } else if (form.agents % c !== 0) {
      errors.push(`${form.agents} agents cannot be split into ${c} equal cliques`);
    } else if (form.agents / c < 3) {
      errors.push(`cliques of ${form.agents / c} agents cannot be rewired; use at least 3 per clique`);
    }
  } else if (form.cliques !== null) {
    errors.push(`cliques only apply to caveman networks, not ${form.network}`);
  }
  if (!Number.isInteger(form.generations) || form.generations < 1) {
    errors.push("generations must be a positive integer");
  }
  if (!Number.isInteger(form.seeds) || form.seeds < 1) {
    errors.push("seeds must be a positive integer");
  }
  if (!form.initialization.trim()) {
    errors.push("initialization prompt must not be empty");
  }
  if (!form.transformation.trim()) {
    errors.push("transformation prompt must not be empty");
  }
  if (
    form.personalityMode === "per_agent" &&
    form.personalityTexts.length !== form.agents
  ) {
    errors.push(
      `per-agent personalities need exactly ${form.agents} entries, got ${form.personalityTexts.length}`,
    );
  }
  if (form.backendKind === "mock") {
    if (!MOCK_RULES.includes(form.mockRule)) {
      errors.push(`mock rule must be one of ${MOCK_RULES.join(", ")}`);
    }
    if (!Number.isInteger(form.headWords) || form.headWords < 1) {
      errors.push("head words must be a positive integer");
    }
  } else if (!form.backendUrl.trim()) {
    errors.push("backend URL must not be empty");
  }
  if (!Number.isInteger(form.maxTokens) || form.maxTokens < 1) {
    errors.push("max tokens must be a positive integer");
  }
  if (!(form.temperature >= 0)) {
    errors.push("temperature must be at least 0");
  }
  if (!(form.timeout > 0)) {
    errors.push("timeout must be positive");
  }
  if (!Number.isInteger(form.retries) || form.retries < 0) {
    errors.push("retries must be 0 or more");
  }
  if (!Number.isInteger(form.parallelism) || form.parallelism < 1) {
    errors.push("parallelism must be a positive integer");
  }
  if (!Number.isInteger(form.rngSeed)) {
    errors.push("rng seed must be an integer");
  }
  if (!Number.isInteger(form.keywordCount) || form.keywordCount < 1) {
    errors.push("keyword count must be a positive integer");
  }
  return errors;
}

/** Serialize a (valid) form into the config JSON the service accepts. */
export function formToConfig(form: ExperimentForm): SimulationConfig {
  const personalities: Personalities =
    form.personalityMode === "uniform"
      ? { mode: "uniform", text: form.personalityText }
      : { mode: "per_agent", texts: [...form.personalityTexts] };
  return {
    name: form.name,
    n_agents: form.agents,
    n_generations: form.generations,
    n_seeds: form.seeds,
    network: { kind: form.network, n_cliques: form.cliques },
    prompts: {
      name: form.promptsName,
      initialization: form.initialization,
      transformation: form.transformation,
    },
    personalities,
    backend: {
      kind: form.backendKind,
      url: form.backendKind === "mock" ? null : form.backendUrl,
      rule: form.backendKind === "mock" ? form.mockRule : null,
      head_words: form.headWords,
      bearer_token:
        form.backendKind !== "mock" && form.bearerToken ? form.bearerToken : null,
    },
    params: {
      max_tokens: form.maxTokens,
      temperature: form.temperature,
      timeout: form.timeout,
      retries: form.retries,
    },
    parallelism: form.parallelism,
    rng_seed: form.rngSeed,
    shuffle_neighbor_stories: form.shuffleNeighbors,
    keyword_count: form.keywordCount,
    embeddings_path: form.embeddingsPath || null,
  };
}

/** Inverse of formToConfig — used to reload a past run into the form. */
export function configToForm(config: SimulationConfig): ExperimentForm {
  const uniform = config.personalities.mode === "uniform";
  return {
    name: config.name,
    agents: config.n_agents,
    generations: config.n_generations,
    seeds: config.n_seeds,
    network: config.network.kind,
    cliques: config.network.n_cliques,
    promptsName: config.prompts.name,
    initialization: config.prompts.initialization,
    transformation: config.prompts.transformation,
    personalityMode: config.personalities.mode,
    personalityText: uniform
      ? (config.personalities as { text: string }).text
      : "",
    personalityTexts: uniform
      ? []
      : [...(config.personalities as { texts: string[] }).texts],
    backendKind: config.backend.kind,
    backendUrl: config.backend.url ?? "",
    mockRule: config.backend.rule ?? "templated",
    headWords: config.backend.head_words,
    bearerToken: config.backend.bearer_token ?? "",
    maxTokens: config.params.max_tokens,
    temperature: config.params.temperature,
    timeout: config.params.timeout,
    retries: config.params.retries,
    parallelism: config.parallelism,
    rngSeed: config.rng_seed,
    shuffleNeighbors: config.shuffle_neighbor_stories,
    keywordCount: config.keyword_count,
    embeddingsPath: config.embeddings_path ?? "",
  };
}
