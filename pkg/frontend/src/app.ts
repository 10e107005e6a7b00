/**
 * Dashboard wiring: one session per page, state restored from the URL
 * hash, all displayed numbers taken verbatim from server payloads.
 */

import {
  ApiError,
  WorkbenchClient,
  type BundleJson,
  type CompressResponse,
  type DiagnosticsResponse,
  type EvaluateResponse,
} from "./api.js";
import { formatDelta, formatDuration, formatSpeedup, formatValue } from "./format.js";
import {
  addChild,
  deleteNode,
  isLeaf,
  moveNode,
  renameNode,
  type TreeJson,
} from "./treeEdit.js";

const client = new WorkbenchClient("");

interface UiState {
  sessionId: string;
  tree: TreeJson | null;
  baselineValues: Record<string, number>;
  compression: CompressResponse | null;
  diagnostics: DiagnosticsResponse | null;
  evaluation: EvaluateResponse | null;
  groupValues: Record<string, number>;
  freeValues: Record<string, number>;
}

let state: UiState;
// later requests supersede earlier ones; stale responses are dropped
let requestSeq = 0;

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

function setStatus(message: string, isError = false): void {
  const el = $("status");
  el.textContent = message;
  el.className = isError ? "status error" : "status";
}

async function guarded<T>(work: () => Promise<T>): Promise<T | undefined> {
  try {
    return await work();
  } catch (err) {
    setStatus(err instanceof ApiError ? `${err.message}` : String(err), true);
    return undefined;
  }
}

// ---------------------------------------------------------------------------
// Baseline results

function renderBaseline(): void {
  const tbody = $("baseline-body");
  tbody.innerHTML = "";
  for (const [key, value] of Object.entries(state.baselineValues)) {
    const row = document.createElement("tr");
    row.innerHTML = `<td>${key}</td><td class="num">${formatValue(value)}</td>`;
    tbody.appendChild(row);
  }
}

async function loadBundle(): Promise<void> {
  const raw = ($("bundle-input") as HTMLTextAreaElement).value;
  await guarded(async () => {
    const bundle = JSON.parse(raw) as BundleJson;
    const info = await client.putProvenance(state.sessionId, bundle);
    const { values } = await client.baselineResults(state.sessionId);
    state.baselineValues = values;
    state.compression = null;
    state.diagnostics = null;
    state.evaluation = null;
    renderBaseline();
    renderCompression();
    renderEvaluation();
    setStatus(`loaded ${info.size} monomials over ${info.variables.length} variables`);
  });
}

// ---------------------------------------------------------------------------
// Tree editor

function renderTree(): void {
  const container = $("tree-view");
  container.innerHTML = "";
  if (!state.tree) {
    container.textContent = "No abstraction tree yet.";
    return;
  }
  const cut = new Set(state.compression?.cut ?? []);
  const counts = state.diagnostics?.counts ?? {};
  const render = (node: TreeJson): HTMLElement => {
    const li = document.createElement("li");
    const label = document.createElement("span");
    label.className = "tree-node" + (cut.has(node.name) ? " in-cut" : "");
    const count = counts[node.name];
    label.textContent = count === undefined ? node.name : `${node.name} [${count}]`;
    li.appendChild(label);
    const controls = document.createElement("span");
    controls.className = "tree-controls";
    controls.append(
      button("+", () => editTree((t) => addChild(t, node.name, promptName("new child name")))),
      button("r", () => editTree((t) => renameNode(t, node.name, promptName("new name")))),
      button("x", () => editTree((t) => deleteNode(t, node.name))),
      button("m", () => editTree((t) => moveNode(t, node.name, promptName("new parent name")))),
    );
    li.appendChild(controls);
    if (!isLeaf(node)) {
      const ul = document.createElement("ul");
      node.children!.forEach((c) => ul.appendChild(render(c)));
      li.appendChild(ul);
    }
    return li;
  };
  const ul = document.createElement("ul");
  ul.appendChild(render(state.tree));
  container.appendChild(ul);
}

function button(text: string, onClick: () => void): HTMLButtonElement {
  const b = document.createElement("button");
  b.textContent = text;
  b.addEventListener("click", onClick);
  return b;
}

function promptName(message: string): string {
  const name = window.prompt(message);
  if (!name) throw new Error("cancelled");
  return name;
}

function editTree(edit: (t: TreeJson) => TreeJson): void {
  void guarded(async () => {
    const base = state.tree ?? { name: promptName("root node name") };
    const next = edit(base);
    await client.putTree(state.sessionId, next);
    state.tree = next;
    state.compression = null;
    state.diagnostics = null;
    renderTree();
    renderCompression();
    setStatus("tree updated");
  });
}

async function loadTreeJson(): Promise<void> {
  const raw = ($("tree-input") as HTMLTextAreaElement).value;
  await guarded(async () => {
    const tree = JSON.parse(raw) as TreeJson;
    await client.putTree(state.sessionId, tree);
    state.tree = tree;
    state.compression = null;
    state.diagnostics = null;
    renderTree();
    renderCompression();
    setStatus("tree loaded");
  });
}

// ---------------------------------------------------------------------------
// Compression + assignment form

async function runCompress(): Promise<void> {
  const bound = Number(($("bound-input") as HTMLInputElement).value);
  const seq = ++requestSeq;
  await guarded(async () => {
    const result = await client.compress(state.sessionId, bound);
    if (seq !== requestSeq) return; // superseded
    state.compression = result;
    state.diagnostics = await client.diagnostics(state.sessionId);
    state.groupValues = Object.fromEntries(result.groups.map((g) => [g.meta, g.default]));
    state.freeValues = {};
    state.evaluation = null;
    syncBoundControls(result.min_size, result.original_size);
    renderCompression();
    renderTree();
    renderDiagnostics();
    renderEvaluation();
    setStatus(
      result.feasible
        ? `compressed to ${result.size} monomials with ${result.expressiveness} meta-variables`
        : `bound ${bound} is infeasible; minimum achievable size is ${result.size}`,
      !result.feasible,
    );
  });
}

function syncBoundControls(min: number, max: number): void {
  const slider = $("bound-slider") as HTMLInputElement;
  slider.min = String(min);
  slider.max = String(max);
  slider.disabled = false;
}

function renderCompression(): void {
  const summary = $("compression-summary");
  const form = $("assignment-form");
  form.innerHTML = "";
  if (!state.compression) {
    summary.textContent = "Not compressed yet.";
    return;
  }
  const c = state.compression;
  summary.textContent =
    `cut {${c.cut.join(", ")}} — size ${c.size}/${c.original_size}, ` +
    `expressiveness ${c.expressiveness}, ${c.feasible ? "feasible" : "INFEASIBLE"}`;
  if (!c.feasible) return; // assignment screen only after a feasible compression

  for (const group of c.groups) {
    const fieldset = document.createElement("fieldset");
    const legend = document.createElement("legend");
    legend.textContent = group.meta;
    fieldset.appendChild(legend);
    const leaves = document.createElement("div");
    leaves.className = "group-leaves";
    leaves.textContent = group.leaves
      .map((l) => `${l.name} = ${formatValue(l.baseline)}`)
      .join(", ");
    fieldset.appendChild(leaves);
    const input = document.createElement("input");
    input.type = "number";
    input.step = "0.05";
    input.value = String(state.groupValues[group.meta] ?? group.default);
    input.addEventListener("change", () => {
      state.groupValues[group.meta] = Number(input.value);
      void runEvaluate();
    });
    fieldset.appendChild(input);
    form.appendChild(fieldset);
  }

  const reset = button("reset to defaults", () => {
    state.groupValues = Object.fromEntries(c.groups.map((g) => [g.meta, g.default]));
    state.freeValues = {};
    renderCompression();
    void runEvaluate();
  });
  form.appendChild(reset);
}

// ---------------------------------------------------------------------------
// Evaluation

async function runEvaluate(): Promise<void> {
  if (!state.compression?.feasible) return;
  const seq = ++requestSeq;
  await guarded(async () => {
    const assignments = { ...state.groupValues, ...state.freeValues };
    const result = await client.evaluate(state.sessionId, assignments, "both");
    if (seq !== requestSeq) return;
    state.evaluation = result;
    renderEvaluation();
    setStatus("scenario evaluated");
  });
}

function renderEvaluation(): void {
  const tbody = $("results-body");
  const footer = $("results-footer");
  tbody.innerHTML = "";
  if (!state.evaluation?.full || !state.evaluation.compressed) {
    footer.textContent = "";
    return;
  }
  const { full, compressed, speedup_pct } = state.evaluation;
  for (const key of Object.keys(full.values)) {
    const baseline = state.baselineValues[key] ?? 0;
    const delta = full.deltas[key];
    const row = document.createElement("tr");
    row.innerHTML =
      `<td>${key}</td><td class="num">${formatValue(baseline)}</td>` +
      `<td class="num">${formatValue(full.values[key])}</td>` +
      `<td class="num">${formatValue(compressed.values[key])}</td>` +
      `<td class="num ${delta > 0 ? "up" : delta < 0 ? "down" : ""}">` +
      `${formatDelta(delta, baseline)}</td>`;
    tbody.appendChild(row);
  }
  footer.textContent =
    `size ${full.size} vs ${compressed.size} — ` +
    `time ${formatDuration(full.duration_s)} vs ${formatDuration(compressed.duration_s)} — ` +
    `speedup ${formatSpeedup(speedup_pct ?? 0)}`;
}

// ---------------------------------------------------------------------------
// Under the hood

function renderDiagnostics(): void {
  const container = $("frontier-table");
  container.innerHTML = "";
  if (!state.diagnostics) return;
  const table = document.createElement("table");
  table.innerHTML = "<thead><tr><th>node</th><th>frontier (k → min size)</th></tr></thead>";
  const tbody = document.createElement("tbody");
  for (const [node, rows] of Object.entries(state.diagnostics.frontiers)) {
    const tr = document.createElement("tr");
    const cells = rows.map(([k, size]) => `${k}→${size}`).join("  ");
    tr.innerHTML = `<td>${node}</td><td>${cells}</td>`;
    tbody.appendChild(tr);
  }
  table.appendChild(tbody);
  container.appendChild(table);
}

// ---------------------------------------------------------------------------
// Bootstrap

async function restoreFromHash(): Promise<boolean> {
  const id = window.location.hash.replace(/^#/, "");
  if (!id) return false;
  const restored = await guarded(async () => {
    const s = await client.getState(id);
    state.sessionId = s.id;
    state.tree = s.tree;
    if (s.size !== null) {
      state.baselineValues = (await client.baselineResults(id)).values;
    }
    if (s.compression) {
      const bound = s.compression.bound;
      ($("bound-input") as HTMLInputElement).value = String(bound);
      const result = await client.compress(id, bound); // idempotent re-run
      state.compression = result;
      state.diagnostics = await client.diagnostics(id);
      state.groupValues = Object.fromEntries(result.groups.map((g) => [g.meta, g.default]));
    }
    return true;
  });
  return restored === true;
}

export async function bootstrap(): Promise<void> {
  state = {
    sessionId: "",
    tree: null,
    baselineValues: {},
    compression: null,
    diagnostics: null,
    evaluation: null,
    groupValues: {},
    freeValues: {},
  };
  if (!(await restoreFromHash())) {
    state.sessionId = (await guarded(() => client.createSession())) ?? "";
    window.location.hash = state.sessionId;
  }
  renderBaseline();
  renderTree();
  renderCompression();
  renderDiagnostics();
  renderEvaluation();

  $("load-bundle").addEventListener("click", () => void loadBundle());
  $("load-tree").addEventListener("click", () => void loadTreeJson());
  $("compress").addEventListener("click", () => void runCompress());
  const boundInput = $("bound-input") as HTMLInputElement;
  const boundSlider = $("bound-slider") as HTMLInputElement;
  boundSlider.addEventListener("change", () => {
    boundInput.value = boundSlider.value;
    void runCompress();
  });
  boundInput.addEventListener("change", () => {
    boundSlider.value = boundInput.value;
    void runCompress();
  });
  setStatus(`session ${state.sessionId}`);
}

if (typeof document !== "undefined" && document.getElementById("status")) {
  void bootstrap();
}
