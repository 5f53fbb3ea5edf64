import init, { witness_polygons, enumerate_polygons, perturbation_experiment } from "./pkg/dieudonne_demo.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];
const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

// Draws polygons given as vertex lists [[x, y], ...] on a shared grid.
function plot(canvas, polygons) {
  const ctx = canvas.getContext("2d");
  const pad = 32;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (polygons.length === 0) return;
  const last = polygons[0].vertices[polygons[0].vertices.length - 1];
  const [r, d] = last;
  const sx = (canvas.width - 2 * pad) / r;
  const sy = (canvas.height - 2 * pad) / Math.max(d, 1);
  const X = (x) => pad + x * sx;
  const Y = (y) => canvas.height - pad - y * sy;

  ctx.strokeStyle = "#eee";
  ctx.fillStyle = "#999";
  ctx.font = "11px sans-serif";
  for (let x = 0; x <= r; x++) {
    ctx.beginPath(); ctx.moveTo(X(x), Y(0)); ctx.lineTo(X(x), Y(d)); ctx.stroke();
    ctx.fillText(String(x), X(x) - 3, Y(0) + 14);
  }
  for (let y = 0; y <= d; y++) {
    ctx.beginPath(); ctx.moveTo(X(0), Y(y)); ctx.lineTo(X(r), Y(y)); ctx.stroke();
    ctx.fillText(String(y), X(0) - 14, Y(y) + 4);
  }

  polygons.forEach((np, i) => {
    ctx.strokeStyle = np.color || COLORS[i % COLORS.length];
    ctx.lineWidth = np.width || 2;
    ctx.beginPath();
    np.vertices.forEach(([x, y], k) => (k === 0 ? ctx.moveTo(X(x), Y(y)) : ctx.lineTo(X(x), Y(y))));
    ctx.stroke();
    ctx.fillStyle = ctx.strokeStyle;
    np.vertices.forEach(([x, y]) => { ctx.beginPath(); ctx.arc(X(x), Y(y), 3, 0, 2 * Math.PI); ctx.fill(); });
  });
}

function guard(out, f) {
  try {
    out.classList.remove("error");
    f();
  } catch (e) {
    out.classList.add("error");
    out.textContent = String(e);
  }
}

function runWitness() {
  guard($("w-out"), () => {
    const w = JSON.parse(witness_polygons(num("w-c"), num("w-d"), num("w-p")));
    w.base.color = COLORS[0];
    w.twisted.color = COLORS[1];
    plot($("w-canvas"), [w.base, w.twisted]);
    $("w-legend").innerHTML =
      `<span style="color:${COLORS[0]}">base ${w.base.label}</span>` +
      `<span style="color:${COLORS[1]}">twisted ${w.twisted.label}</span>`;
    $("w-out").textContent =
      `j = ${w.bounds.j}; phi-matrices agree mod p^${w.congruence_level}; ` +
      `checks ${w.passed ? "passed" : "FAILED"}\n` +
      `twisted relation valuations: ${JSON.stringify(w.twisted_qx_valuations)}`;
  });
}

function runEnumerate() {
  guard($("e-out"), () => {
    const list = JSON.parse(enumerate_polygons(num("e-c"), num("e-d")));
    plot($("e-canvas"), list);
    $("e-out").textContent = `${list.length} polygons\n` + list.map((np) => np.label).join("\n");
  });
}

function runExperiment() {
  guard($("x-out"), () => {
    const x = JSON.parse(
      perturbation_experiment(num("x-c"), num("x-d"), num("x-p"), num("x-level"), num("x-trials"), num("x-seed")),
    );
    x.subject.color = "#000";
    x.subject.width = 4;
    plot($("x-canvas"), [x.subject, ...x.observed]);
    $("x-out").textContent =
      `j = ${x.j}, level = ${x.level}: ${x.verdict}\n` +
      x.observed.map((o) => `${String(o.count).padStart(5)}  ${o.label}`).join("\n");
  });
}

await init();
$("w-run").onclick = runWitness;
$("e-run").onclick = runEnumerate;
$("x-run").onclick = runExperiment;
runWitness();
runEnumerate();
runExperiment();
