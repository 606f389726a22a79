/** Explorer cockpit: wires the map view, piano roll, synth, and
 * sweet-spot panel to the DOM.  Pure logic lives in the sibling
 * modules; this file only shuffles DOM events. */

import { ApiClient } from "./api.js";
import { clientToPixel, dragToRect, zoomedConfig } from "./mapview.js";
import { layoutPianoRoll } from "./pianoroll.js";
import { SweetSpotPanel } from "./session.js";
import { playScore, type PlaybackHandle } from "./synth.js";
import type { GeneratorInfo, GeneratorSpec, MapConfigBody, ScoreJson } from "./types.js";

const api = new ApiClient("");
const $ = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;

let generators: GeneratorInfo[] = [];
let currentConfig: MapConfigBody | null = null;
let currentMapId: string | null = null;
let currentSpec: GeneratorSpec | null = null;
let currentScore: ScoreJson | null = null;
let playback: PlaybackHandle | null = null;
let dragStart: { x: number; y: number } | null = null;

function info(kind: string): GeneratorInfo {
  const g = generators.find((g) => g.kind === kind);
  if (!g) throw new Error(`unknown kind ${kind}`);
  return g;
}

function defaultConfig(kind: string): MapConfigBody {
  const g = info(kind);
  const mapped = g.params.slice(0, 2).map((p) => p.name);
  const fixed: Record<string, number> = {};
  for (const p of g.params) if (!mapped.includes(p.name)) fixed[p.name] = p.default;
  // Parametric maps are expensive by design; keep the default modest.
  if (kind === "julia_plot") Object.assign(fixed, { width: 16, height: 16, max_iter: 64 });
  if (kind === "ifs") Object.assign(fixed, { depth: 4 });
  return {
    kind,
    mapped,
    fixed,
    window: [0, 0, 1, 1],
    width: 48,
    height: 48,
    feature: ($("feature-select") as HTMLSelectElement).value || "note_count",
  };
}

function setStatus(text: string) {
  $("status").textContent = text;
}

async function computeMap(config: MapConfigBody) {
  currentConfig = config;
  setStatus("computing map…");
  $<HTMLButtonElement>("compute-btn").disabled = true;
  try {
    const { id } = await api.submitMap(config);
    const status = await api.waitForMap(id);
    currentMapId = id;
    const img = $<HTMLImageElement>("map-img");
    img.src = api.mapPngUrl(id) + `&t=${Date.now()}`;
    setStatus(
      `map ${id.slice(0, 8)}: ${config.mapped.join(" × ")} | ` +
      `feature ${config.feature} ∈ [${status.value_min?.toFixed(3)}, ${status.value_max?.toFixed(3)}] | ` +
      `${status.compute_seconds?.toFixed(2)}s`,
    );
  } catch (err) {
    setStatus(`map failed: ${err}`);
  } finally {
    $<HTMLButtonElement>("compute-btn").disabled = false;
  }
}

function drawPianoRoll(score: ScoreJson) {
  const canvas = $<HTMLCanvasElement>("roll-canvas");
  const ctx = canvas.getContext("2d")!;
  ctx.fillStyle = "#10131a";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  const layout = layoutPianoRoll(score, canvas.width, canvas.height);
  for (const r of layout.rects) {
    ctx.fillStyle = r.color;
    ctx.fillRect(r.x, r.y, Math.max(r.w, 1), Math.max(r.h - 1, 1));
  }
  $("roll-caption").textContent =
    `${score.notes.length} notes | t ∈ [${layout.timeMin.toFixed(2)}, ${layout.timeMax.toFixed(2)}] s` +
    ` | pitch ∈ [${layout.pitchMin.toFixed(1)}, ${layout.pitchMax.toFixed(1)}]`;
}

async function showSpec(spec: GeneratorSpec) {
  currentSpec = spec;
  $("spec-json").textContent = JSON.stringify(spec, null, 2);
  currentScore = await api.score(spec);
  drawPianoRoll(currentScore);
}

function stopPlayback() {
  playback?.stop();
  playback = null;
}

async function onMapClick(ev: MouseEvent) {
  if (!currentMapId || !currentConfig) return;
  const img = $<HTMLImageElement>("map-img");
  const box = img.getBoundingClientRect();
  const hit = clientToPixel(box, currentConfig.width, currentConfig.height, ev.clientX, ev.clientY);
  if (!hit) return;
  setStatus(`lookup pixel (${hit.px}, ${hit.py})…`);
  const spec = await api.lookup(currentMapId, hit.px, hit.py);
  await showSpec(spec);
  setStatus(`pixel (${hit.px}, ${hit.py}) → ${currentScore!.notes.length} notes`);
}

function wireMapGestures() {
  const img = $<HTMLImageElement>("map-img");
  img.addEventListener("pointerdown", (ev) => {
    dragStart = { x: ev.clientX, y: ev.clientY };
  });
  img.addEventListener("pointerup", async (ev) => {
    const start = dragStart;
    dragStart = null;
    if (!start || !currentConfig) return;
    const moved = Math.hypot(ev.clientX - start.x, ev.clientY - start.y);
    if (moved < 6) {
      await onMapClick(ev);
      return;
    }
    const box = img.getBoundingClientRect();
    const a = clientToPixel(box, currentConfig.width, currentConfig.height, start.x, start.y);
    const b = clientToPixel(box, currentConfig.width, currentConfig.height, ev.clientX, ev.clientY);
    if (!a || !b) return;
    const rect = dragToRect(a.px, a.py, b.px + 1, b.py + 1, currentConfig.width, currentConfig.height);
    if (!rect) return;
    // Recompute is explicit and button-confirmed elsewhere; a drag is
    // the explicit gesture here.
    await computeMap(zoomedConfig(currentConfig, rect));
  });
}

function wireSessionPanel(panel: SweetSpotPanel) {
  const paramSelect = $<HTMLSelectElement>("session-param");
  const renderSession = () => {
    const s = panel.session;
    if (!s) return;
    $("session-info").textContent =
      `session ${s.id.slice(0, 8)} | round ${s.round} | ` +
      `bracket(${paramSelect.value}) width ${panel.bracketWidth(paramSelect.value).toFixed(4)}`;
    $("session-history").textContent = panel
      .historySummary()
      .map((h, i) => `${i + 1}. ${h.param} → ${h.chosen.toFixed(4)}`)
      .join("\n");
    $("session-spec").textContent = JSON.stringify(s.spec.params, null, 1);
  };

  $("session-start").addEventListener("click", async () => {
    const kind = $<HTMLSelectElement>("kind-select").value;
    await panel.start(kind, 2, currentSpec ?? undefined);
    const order = panel.session!.param_order;
    paramSelect.innerHTML = order.map((p) => `<option>${p}</option>`).join("");
    renderSession();
  });

  $("session-propose").addEventListener("click", async () => {
    if (!panel.session) return;
    const proposal = await panel.propose(paramSelect.value);
    const holder = $("candidates");
    holder.innerHTML = "";
    proposal.candidates.forEach((cand, i) => {
      const div = document.createElement("div");
      div.className = "candidate";
      const label = i === 0 ? "current" : `probe ${i}`;
      div.innerHTML =
        `<strong>${label}</strong>: ${proposal.param} = ${cand.params[proposal.param].toFixed(4)} ` +
        `(${proposal.scores[i].notes.length} notes) `;
      const playBtn = document.createElement("button");
      playBtn.textContent = "play";
      playBtn.onclick = () => {
        stopPlayback();
        playback = playScore(proposal.scores[i]);
        drawPianoRoll(proposal.scores[i]);
      };
      const pickBtn = document.createElement("button");
      pickBtn.textContent = "prefer";
      pickBtn.onclick = async () => {
        await panel.choose(i);
        holder.innerHTML = "";
        renderSession();
      };
      div.append(playBtn, pickBtn);
      holder.appendChild(div);
    });
    renderSession();
  });

  // Refresh reconstructs everything from server state.
  panel.restore().then((ok) => {
    if (ok) {
      const order = panel.session!.param_order;
      paramSelect.innerHTML = order.map((p) => `<option>${p}</option>`).join("");
      renderSession();
    }
  });
}

async function main() {
  generators = await api.generators();
  const kindSelect = $<HTMLSelectElement>("kind-select");
  kindSelect.innerHTML = generators.map((g) => `<option>${g.kind}</option>`).join("");

  $("compute-btn").addEventListener("click", () => computeMap(defaultConfig(kindSelect.value)));
  $("reset-btn").addEventListener("click", () => {
    if (currentConfig) computeMap({ ...currentConfig, window: [0, 0, 1, 1] });
  });
  $("play-btn").addEventListener("click", () => {
    if (currentScore) {
      stopPlayback();
      playback = playScore(currentScore);
    }
  });
  $("stop-btn").addEventListener("click", stopPlayback);
  $("midi-btn").addEventListener("click", async () => {
    if (!currentSpec) return;
    const blob = await api.scoreMidi(currentSpec);
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = `${currentSpec.kind}.mid`;
    a.click();
    URL.revokeObjectURL(a.href);
  });

  wireMapGestures();
  wireSessionPanel(new SweetSpotPanel(api, localStorage));
  setStatus("ready — compute a map, then click or drag-zoom it");
}

main().catch((err) => setStatus(`startup failed: ${err}`));
