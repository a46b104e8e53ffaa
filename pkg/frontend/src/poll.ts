/** Status polling with capped exponential backoff.
 *
 * Runs are minutes-to-hours long with live backends; the console polls
 * every 2 s at first and backs off to 10 s so idle tabs stay cheap.
 */

import type { JobStatus } from "./types.js";

export interface PollOptions {
  intervalMs?: number;
  backoff?: number;
  maxIntervalMs?: number;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) =>
  new Promise<void>((resolve) => setTimeout(resolve, ms));

/** Poll until the job reaches a terminal state; returns that status. */
export async function pollUntilDone(
  getStatus: () => Promise<JobStatus>,
  onUpdate: (status: JobStatus) => void,
  options: PollOptions = {},
): Promise<JobStatus> {
  const {
    intervalMs = 2000,
    backoff = 1.25,
    maxIntervalMs = 10000,
    sleep = defaultSleep,
  } = options;
  let wait = intervalMs;
  for (;;) {
    const status = await getStatus();
    onUpdate(status);
    if (status.state === "done" || status.state === "failed") {
      return status;
    }
    await sleep(wait);
    wait = Math.min(wait * backoff, maxIntervalMs);
  }
}
