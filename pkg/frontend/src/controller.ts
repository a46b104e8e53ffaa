/** Orchestration between the form, the API client and the figure panels.
 *
 * Framework-free so the whole submit/monitor/figures flow is testable
 * with a stub client. The invariant that matters: an invalid form never
 * reaches the network.
 */

import type { ApiClient } from "./api.js";
import type { ExperimentForm } from "./validate.js";
import { formToConfig, validateForm } from "./validate.js";
import { pollUntilDone, type PollOptions } from "./poll.js";
import type {
  JobStatus,
  KeywordsResponse,
  LayoutResponse,
  MatrixResponse,
  MetricsResponse,
  StoryRow,
  TopologyPreview,
} from "./types.js";

export type SubmitResult =
  | { kind: "invalid"; errors: string[] }
  | { kind: "submitted"; jobId: string };

export interface FigureData {
  metrics: MetricsResponse;
  matrix: MatrixResponse;
  stories: StoryRow[];
  keywords: KeywordsResponse;
  layout: LayoutResponse;
}

export class Console {
  constructor(private readonly api: ApiClient) {}

  /** Validate locally; only a clean form is posted and started. */
  async submit(form: ExperimentForm): Promise<SubmitResult> {
    const errors = validateForm(form);
    if (errors.length > 0) {
      return { kind: "invalid", errors };
    }
    const created = await this.api.createSimulation(formToConfig(form));
    await this.api.runSimulation(created.id);
    return { kind: "submitted", jobId: created.id };
  }

  monitor(
    jobId: string,
    onUpdate: (status: JobStatus) => void,
    options?: PollOptions,
  ): Promise<JobStatus> {
    return pollUntilDone(() => this.api.getStatus(jobId), onUpdate, options);
  }

  /** Preview without server round-trips for forms the server would 400. */
  async preview(form: ExperimentForm): Promise<TopologyPreview> {
    const errors = validateForm({ ...form, name: "preview" });
    if (errors.length > 0) {
      throw new Error(errors[0]);
    }
    return this.api.previewTopology(
      form.network,
      form.agents,
      form.network === "caveman" ? form.cliques : null,
    );
  }

  /** Everything the figures tab needs, fetched concurrently. */
  async figures(jobId: string, seed: number): Promise<FigureData> {
    const [metrics, matrix, stories, keywords, layout] = await Promise.all([
      this.api.getMetrics(jobId),
      this.api.getMatrix(jobId, seed),
      this.api.getStories(jobId, seed),
      this.api.getKeywords(jobId, seed),
      this.api.getLayout(jobId, seed),
    ]);
    return { metrics, matrix, stories, keywords, layout };
  }
}
