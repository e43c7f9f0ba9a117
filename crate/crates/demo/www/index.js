import init, { defectProfile, rauzyGraph, decompose } from "./pkg/almostrich_demo.js";

const $ = (id) => document.getElementById(id);

function input() {
  return [$("source").value.trim(), $("theta").value.trim(), $("seed").value, $("directive").value, Number($("len").value)];
}

function fail(el, e) {
  el.className = "err";
  el.textContent = String(e.message ?? e);
}

function plot(points) {
  const svg = $("plot");
  const w = svg.width.baseVal.value, h = svg.height.baseVal.value, pad = 30;
  const maxX = Math.max(1, points[points.length - 1][0]);
  const maxY = Math.max(1, ...points.map((p) => p[1]));
  const x = (v) => pad + (v / maxX) * (w - 2 * pad);
  const y = (v) => h - pad - (v / maxY) * (h - 2 * pad);
  const d = points.map((p, i) => `${i ? "L" : "M"}${x(p[0]).toFixed(1)},${y(p[1]).toFixed(1)}`).join(" ");
  svg.innerHTML =
    `<line x1="${pad}" y1="${h - pad}" x2="${w - pad}" y2="${h - pad}" stroke="#999"/>` +
    `<line x1="${pad}" y1="${pad}" x2="${pad}" y2="${h - pad}" stroke="#999"/>` +
    `<text x="${pad}" y="${pad - 8}" font-size="11">defect ${maxY}</text>` +
    `<text x="${w - pad}" y="${h - 8}" font-size="11" text-anchor="end">prefix length ${maxX}</text>` +
    `<path d="${d}" fill="none" stroke="#246" stroke-width="1.5"/>`;
}

function runProfile() {
  const out = $("profile-summary");
  try {
    const r = JSON.parse(defectProfile(...input()));
    out.className = "";
    out.textContent =
      `${r.descriptor} under ${r.antimorphism}: defect ${r.final_defect}` +
      (r.last_increase === null ? "" : `, last increase at ${r.last_increase}`) +
      (r.stable_over_last_half ? ", stable over the last half" : ", still growing") +
      `. Prefix: ${r.prefix}`;
    plot(r.points);
  } catch (e) {
    fail(out, e);
  }
}

function runRauzy() {
  const out = $("rauzy-summary");
  try {
    const { report, svg } = JSON.parse(rauzyGraph(...input(), Number($("n").value)));
    const c = report.criteria;
    const holds = c.loops_palindromic && c.tree_after_loop_removal;
    out.className = holds ? "ok" : "err";
    out.textContent =
      `${report.vertices.length} vertices, ${report.edges.length} edges; ` +
      `loops palindromic: ${c.loops_palindromic}, tree after removing loops: ${c.tree_after_loop_removal}; ` +
      `T(${report.n}) = ${report.t}` + (report.closure.closed ? "" : " (language not closed at this length)");
    $("graph").innerHTML = svg;
  } catch (e) {
    fail(out, e);
    $("graph").innerHTML = "";
  }
}

function runDecompose() {
  const out = $("decompose-summary");
  try {
    const text = decompose(...input(), $("method").value);
    const r = JSON.parse(text);
    out.className = r.verdict === "pass" ? "ok" : "err";
    const letters = r.alphabet.map((l) => `${l.name} → ${l.image}`).join(", ");
    out.textContent = `${r.verdict}: ${letters}; derived word starts ${r.v_prefix.slice(0, 80)}`;
    $("decompose-out").textContent = text;
  } catch (e) {
    fail(out, e);
    $("decompose-out").textContent = "";
  }
}

await init();
$("run-profile").addEventListener("click", runProfile);
$("run-rauzy").addEventListener("click", runRauzy);
$("run-decompose").addEventListener("click", runDecompose);
runProfile();
