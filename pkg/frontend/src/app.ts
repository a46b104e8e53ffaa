/** DOM wiring. All state transitions go through the Console controller;
 * all drawing goes through the pure view models in figures.ts. */

import { ApiClient, ApiError } from "./api.js";
import { Console, type FigureData } from "./controller.js";
import {
  SIMILARITY_CURVES,
  cellToPair,
  curveModel,
  graphModel,
  heatmapModel,
  storiesByIndex,
  wordChainRows,
  type CurveModel,
} from "./figures.js";
import { previewLayout } from "./forces.js";
import { viridisCss } from "./color.js";
import { defaultForm, type ExperimentForm } from "./validate.js";
import type { JobStatus, StoryRow } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function svgById(id: string): SVGSVGElement {
  const node = document.getElementById(id);
  if (!(node instanceof SVGSVGElement)) {
    throw new Error(`missing svg #${id}`);
  }
  return node;
}

function numberValue(id: string): number {
  return Number(byId<HTMLInputElement>(id).value);
}

function readForm(): ExperimentForm {
  const form = defaultForm();
  form.name = byId<HTMLInputElement>("f-name").value.trim();
  form.agents = numberValue("f-agents");
  form.generations = numberValue("f-generations");
  form.seeds = numberValue("f-seeds");
  form.network = byId<HTMLSelectElement>("f-network")
    .value as ExperimentForm["network"];
  const cliquesRaw = byId<HTMLInputElement>("f-cliques").value.trim();
  form.cliques =
    form.network === "caveman" && cliquesRaw !== "" ? Number(cliquesRaw) : null;
  form.initialization = byId<HTMLTextAreaElement>("f-init").value;
  form.transformation = byId<HTMLTextAreaElement>("f-transform").value;
  form.promptsName = "console";
  form.personalityMode = byId<HTMLSelectElement>("f-personality-mode")
    .value as ExperimentForm["personalityMode"];
  const personalityText = byId<HTMLTextAreaElement>("f-personality").value;
  if (form.personalityMode === "uniform") {
    form.personalityText = personalityText;
  } else {
    form.personalityTexts = personalityText
      .split("\n")
      .map((line) => line.trim());
  }
  form.backendKind = byId<HTMLSelectElement>("f-backend-kind")
    .value as ExperimentForm["backendKind"];
  form.backendUrl = byId<HTMLInputElement>("f-backend-url").value.trim();
  form.mockRule = byId<HTMLSelectElement>("f-mock-rule")
    .value as ExperimentForm["mockRule"];
  form.seeds = numberValue("f-seeds");
  form.maxTokens = numberValue("f-max-tokens");
  form.temperature = numberValue("f-temperature");
  form.rngSeed = numberValue("f-rng-seed");
  form.shuffleNeighbors = byId<HTMLInputElement>("f-shuffle").checked;
  return form;
}

function showErrors(errors: string[]): void {
  const list = byId<HTMLUListElement>("form-errors");
  list.replaceChildren(
    ...errors.map((message) => {
      const item = document.createElement("li");
      item.textContent = message;
      return item;
    }),
  );
}

// -------------------------------------------------------------- renderers

function renderPreview(
  host: SVGSVGElement,
  nNodes: number,
  edges: [number, number][],
): void {
  const layout = previewLayout(nNodes, edges, { seed: 7 });
  host.replaceChildren();
  const scale = (v: number) => 150 + v * 135;
  for (const [a, b] of layout.edges) {
    host.append(
      svgEl("line", {
        x1: scale(layout.positions[a][0]),
        y1: scale(layout.positions[a][1]),
        x2: scale(layout.positions[b][0]),
        y2: scale(layout.positions[b][1]),
        class: "preview-edge",
      }),
    );
  }
  layout.positions.forEach(([x, y], index) => {
    const node = svgEl("circle", {
      cx: scale(x),
      cy: scale(y),
      r: 7,
      class: "preview-node",
    });
    const title = svgEl("title", {});
    title.textContent = `agent ${index}`;
    node.append(title);
    host.append(node);
  });
}

function renderHeatmap(canvas: HTMLCanvasElement, data: FigureData): void {
  const model = heatmapModel(data.matrix);
  const cell = Math.max(2, Math.floor(600 / Math.max(model.n, 1)));
  canvas.width = model.n * cell;
  canvas.height = model.n * cell;
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    return;
  }
  for (let i = 0; i < model.n; i++) {
    for (let j = 0; j < model.n; j++) {
      ctx.fillStyle = model.colorAt(i, j);
      ctx.fillRect(j * cell, i * cell, cell, cell);
    }
  }
  ctx.strokeStyle = "#000";
  ctx.lineWidth = 1;
  for (const offset of model.separators) {
    ctx.beginPath();
    ctx.moveTo(offset * cell, 0);
    ctx.lineTo(offset * cell, model.n * cell);
    ctx.moveTo(0, offset * cell);
    ctx.lineTo(model.n * cell, offset * cell);
    ctx.stroke();
  }

  const stories = storiesByIndex(data.stories);
  const hover = byId<HTMLDivElement>("cell-detail");
  canvas.onmousemove = (event) => {
    const rect = canvas.getBoundingClientRect();
    const j = Math.floor(((event.clientX - rect.left) / rect.width) * model.n);
    const i = Math.floor(((event.clientY - rect.top) / rect.height) * model.n);
    if (i < 0 || j < 0 || i >= model.n || j >= model.n) {
      return;
    }
    const pair = cellToPair(i, j, model.nAgents);
    const left = stories.get(pair.row.index);
    const right = stories.get(pair.column.index);
    hover.replaceChildren();
    for (const [place, story] of [
      [pair.row, left],
      [pair.column, right],
    ] as const) {
      const panel = document.createElement("div");
      panel.className = "story-panel";
      const head = document.createElement("h4");
      head.textContent = `generation ${place.generation}, agent ${place.agent} — similarity ${model.values[i][j].toFixed(3)}`;
      const body = document.createElement("p");
      body.textContent = story ? story.text : "(story unavailable)";
      panel.append(head, body);
      hover.append(panel);
    }
  };
}

function curvePath(
  points: { generation: number; value: number }[],
  x: (g: number) => number,
  y: (v: number) => number,
): string {
  return points
    .map(
      (p, i) => `${i === 0 ? "M" : "L"}${x(p.generation).toFixed(1)},${y(p.value).toFixed(1)}`,
    )
    .join(" ");
}

function renderCurves(host: SVGSVGElement, data: FigureData): void {
  host.replaceChildren();
  const width = 640;
  const height = 260;
  const pad = 36;
  const generations = data.metrics.grid.n_generations;
  const x = (g: number) =>
    pad + (generations <= 1 ? 0 : (g / (generations - 1)) * (width - 2 * pad));
  const y = (v: number) => height - pad - v * (height - 2 * pad);
  host.append(
    svgEl("line", { x1: pad, y1: height - pad, x2: width - pad, y2: height - pad, class: "axis" }),
    svgEl("line", { x1: pad, y1: pad, x2: pad, y2: height - pad, class: "axis" }),
  );
  const palette = ["#4fc3f7", "#ffb74d", "#aed581"];
  const models: CurveModel[] = [];
  SIMILARITY_CURVES.forEach((name, slot) => {
    const series = data.metrics.metrics[name];
    if (!series) {
      return;
    }
    const model = curveModel(name, series);
    models.push(model);
    if (!model.bandCollapsed) {
      const forward = model.points.map((p) => `${x(p.generation)},${y(p.hi)}`);
      const back = [...model.points]
        .reverse()
        .map((p) => `${x(p.generation)},${y(p.lo)}`);
      host.append(
        svgEl("polygon", {
          points: [...forward, ...back].join(" "),
          fill: palette[slot % palette.length],
          class: "band",
        }),
      );
    }
    host.append(
      svgEl("path", {
        d: curvePath(
          model.points.map((p) => ({ generation: p.generation, value: p.mean })),
          x,
          y,
        ),
        stroke: palette[slot % palette.length],
        class: "curve",
      }),
    );
    const label = svgEl("text", {
      x: width - pad,
      y: pad + 16 * slot,
      "text-anchor": "end",
      fill: palette[slot % palette.length],
      class: "curve-label",
    });
    label.textContent = name.replaceAll("_", " ");
    host.append(label);
  });
  if (models.every((m) => m.bandCollapsed)) {
    const note = svgEl("text", { x: pad, y: 16, class: "figure-note" });
    note.textContent = "single seed: std bands collapse to the lines";
    host.append(note);
  }
}

function renderChains(host: SVGSVGElement, data: FigureData): void {
  host.replaceChildren();
  const rows = wordChainRows(data.keywords).slice(0, 40);
  const generations = data.metrics.grid.n_generations;
  const rowHeight = 16;
  const left = 120;
  const step = generations <= 1 ? 0 : 480 / (generations - 1);
  host.setAttribute("height", String(Math.max(40, rows.length * rowHeight + 24)));
  rows.forEach((row, r) => {
    const cy = 20 + r * rowHeight;
    const label = svgEl("text", { x: left - 8, y: cy + 4, "text-anchor": "end", class: "chain-label" });
    label.textContent = row.word;
    host.append(label);
    for (const [a, b] of row.links) {
      host.append(
        svgEl("line", {
          x1: left + a * step,
          y1: cy,
          x2: left + b * step,
          y2: cy,
          class: "chain-link",
        }),
      );
    }
    for (const g of row.generations) {
      host.append(
        svgEl("circle", { cx: left + g * step, cy, r: 4, fill: viridisCss(generations <= 1 ? 0 : g / (generations - 1)) }),
      );
    }
  });
}

function renderGraph(host: SVGSVGElement, data: FigureData): void {
  host.replaceChildren();
  const model = graphModel(data.layout);
  const stories = storiesByIndex(data.stories);
  const scale = (v: number) => 260 + v * 240;
  for (const edge of model.edges) {
    const a = model.nodes[edge.source];
    const b = model.nodes[edge.target];
    host.append(
      svgEl("line", {
        x1: scale(a.x),
        y1: scale(a.y),
        x2: scale(b.x),
        y2: scale(b.y),
        class: edge.successive ? "graph-edge successive" : "graph-edge",
        "stroke-opacity": Math.min(1, Math.max(0.08, edge.weight)),
      }),
    );
  }
  const detail = byId<HTMLDivElement>("graph-detail");
  for (const node of model.nodes) {
    const circle = svgEl("circle", {
      cx: scale(node.x),
      cy: scale(node.y),
      r: 6,
      fill: node.color,
      class: "graph-node",
    });
    circle.addEventListener("click", () => {
      const story = stories.get(node.index);
      detail.textContent = story
        ? `generation ${story.generation}, agent ${story.agent_id}: ${story.text}`
        : `story ${node.index}`;
    });
    host.append(circle);
  }
}

function renderStories(host: HTMLElement, stories: StoryRow[]): void {
  host.replaceChildren(
    ...stories.map((story) => {
      const card = document.createElement("article");
      card.className = "story-card";
      const head = document.createElement("h4");
      head.textContent = `#${story.story_index} — generation ${story.generation}, agent ${story.agent_id}`;
      const body = document.createElement("p");
      body.textContent = story.text;
      card.append(head, body);
      return card;
    }),
  );
}

// ------------------------------------------------------------------ mount

export function mount(): void {
  const api = new ApiClient("");
  const console_ = new Console(api);
  let currentJob: string | null = null;
  let figureData: FigureData | null = null;

  const statusLine = byId<HTMLParagraphElement>("status-line");
  const seedSelect = byId<HTMLSelectElement>("f-figure-seed");

  const setStatus = (status: JobStatus) => {
    const progress =
      status.state === "running" && status.seed_index !== null
        ? ` — seed ${status.seed_index}, generation ${(status.generation ?? 0) + 1}/${status.n_generations}`
        : "";
    const failure = status.error ? ` — ${status.error}` : "";
    statusLine.textContent = `job ${status.id}: ${status.state}${progress}${failure}`;
    statusLine.dataset.state = status.state;
  };

  const drawFigures = () => {
    if (!figureData) {
      return;
    }
    renderHeatmap(byId<HTMLCanvasElement>("heatmap"), figureData);
    renderCurves(svgById("curves"), figureData);
    renderChains(svgById("chains"), figureData);
    renderGraph(svgById("graph"), figureData);
    renderStories(byId<HTMLDivElement>("stories"), figureData.stories);
  };

  const loadFigures = async (jobId: string) => {
    const seed = Number(seedSelect.value) || 0;
    figureData = await console_.figures(jobId, seed);
    drawFigures();
  };

  byId<HTMLButtonElement>("btn-preview").addEventListener("click", async () => {
    const form = readForm();
    try {
      const preview = await console_.preview(form);
      showErrors([]);
      renderPreview(svgById("preview"), preview.n_agents, preview.edges);
    } catch (error) {
      showErrors([error instanceof Error ? error.message : String(error)]);
    }
  });

  byId<HTMLButtonElement>("btn-run").addEventListener("click", async () => {
    const form = readForm();
    try {
      const result = await console_.submit(form);
      if (result.kind === "invalid") {
        showErrors(result.errors);
        return;
      }
      showErrors([]);
      currentJob = result.jobId;
      const final = await console_.monitor(result.jobId, setStatus);
      if (final.state === "done") {
        const seeds = Array.from({ length: final.n_seeds }, (_, i) => i);
        seedSelect.replaceChildren(
          ...seeds.map((s) => {
            const option = document.createElement("option");
            option.value = String(s);
            option.textContent = `seed ${s}`;
            return option;
          }),
        );
        await loadFigures(result.jobId);
      }
    } catch (error) {
      const message =
        error instanceof ApiError
          ? `service: ${error.message}`
          : error instanceof Error
            ? error.message
            : String(error);
      showErrors([message]);
    }
  });

  seedSelect.addEventListener("change", () => {
    if (currentJob) {
      void loadFigures(currentJob);
    }
  });

  byId<HTMLSelectElement>("f-backend-kind").addEventListener("change", () => {
    const kind = byId<HTMLSelectElement>("f-backend-kind").value;
    byId<HTMLInputElement>("f-backend-url").disabled = kind === "mock";
    byId<HTMLSelectElement>("f-mock-rule").disabled = kind !== "mock";
  });

  for (const tab of document.querySelectorAll<HTMLButtonElement>(".tab")) {
    tab.addEventListener("click", () => {
      for (const other of document.querySelectorAll<HTMLButtonElement>(".tab")) {
        other.classList.toggle("active", other === tab);
      }
      for (const panel of document.querySelectorAll<HTMLElement>(".panel")) {
        panel.hidden = panel.id !== `panel-${tab.dataset.panel}`;
      }
    });
  }

  // populate the prompt pickers from the registry
  void (async () => {
    try {
      const prompts = await api.listPrompts();
      const init = byId<HTMLTextAreaElement>("f-init");
      const transform = byId<HTMLTextAreaElement>("f-transform");
      const picker = byId<HTMLSelectElement>("f-prompt-picker");
      picker.replaceChildren(
        new Option("— pick a registered prompt —", ""),
        ...prompts.map((p) => new Option(`${p.name} (${p.role})`, p.name)),
      );
      picker.addEventListener("change", () => {
        const chosen = prompts.find((p) => p.name === picker.value);
        if (!chosen) {
          return;
        }
        if (chosen.role === "initialization") {
          init.value = chosen.text;
        } else {
          transform.value = chosen.text;
        }
      });
      const first = prompts.find((p) => p.role === "transformation");
      if (first && !transform.value) {
        transform.value = first.text;
      }
    } catch {
      // service offline: the form still works, prompts stay manual
    }
  })();
}
