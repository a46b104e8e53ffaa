/** Thin typed client over the service's HTTP API.
 *
 * Every figure and number in the console comes through this module; there
 * is no other network access and no client-side metric computation.
 */

import type {
  CreatedJob,
  JobStatus,
  KeywordsResponse,
  LayoutResponse,
  MatrixResponse,
  MetricsResponse,
  PersonalityEntry,
  PromptEntry,
  PromptRole,
  SimulationConfig,
  StoryRow,
  TopologyPreview,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

type Fetch = typeof fetch;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: Fetch = fetch,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let detail = `${response.status} ${response.statusText}`;
      try {
        const payload = (await response.json()) as { detail?: unknown };
        if (payload && payload.detail !== undefined) {
          detail =
            typeof payload.detail === "string"
              ? payload.detail
              : JSON.stringify(payload.detail);
        }
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  createSimulation(config: SimulationConfig): Promise<CreatedJob> {
    return this.request("POST", "/simulations", config);
  }

  runSimulation(id: string): Promise<{ id: string; state: string }> {
    return this.request("POST", `/simulations/${id}/run`);
  }

  listSimulations(): Promise<JobStatus[]> {
    return this.request("GET", "/simulations");
  }

  getStatus(id: string): Promise<JobStatus> {
    return this.request("GET", `/simulations/${id}/status`);
  }

  getConfig(id: string): Promise<SimulationConfig> {
    return this.request("GET", `/simulations/${id}/config`);
  }

  getMetrics(id: string): Promise<MetricsResponse> {
    return this.request("GET", `/simulations/${id}/metrics`);
  }

  getMatrix(id: string, seed: number): Promise<MatrixResponse> {
    return this.request("GET", `/simulations/${id}/seeds/${seed}/matrix`);
  }

  getStories(id: string, seed: number): Promise<StoryRow[]> {
    return this.request("GET", `/simulations/${id}/seeds/${seed}/stories`);
  }

  getKeywords(id: string, seed: number): Promise<KeywordsResponse> {
    return this.request("GET", `/simulations/${id}/seeds/${seed}/keywords`);
  }

  getLayout(id: string, seed: number): Promise<LayoutResponse> {
    return this.request("GET", `/simulations/${id}/seeds/${seed}/layout`);
  }

  previewTopology(
    kind: string,
    agents: number,
    cliques?: number | null,
  ): Promise<TopologyPreview> {
    const query = new URLSearchParams({ kind, agents: String(agents) });
    if (cliques !== undefined && cliques !== null) {
      query.set("cliques", String(cliques));
    }
    return this.request("GET", `/topology/preview?${query}`);
  }

  listPrompts(): Promise<PromptEntry[]> {
    return this.request("GET", "/prompts");
  }

  addPrompt(
    name: string,
    text: string,
    role: PromptRole,
  ): Promise<{ name: string }> {
    return this.request("POST", "/prompts", { name, text, role });
  }

  listPersonalities(): Promise<PersonalityEntry[]> {
    return this.request("GET", "/personalities");
  }

  addPersonality(name: string, text: string): Promise<{ name: string }> {
    return this.request("POST", "/personalities", { name, text });
  }
}
