import init, { release, hausdorff, capacities } from "./pkg/setdp_web.js";

const VIEW = { lo: -3, hi: 4 };
const COLORS = ["#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"];

const $ = (id) => document.getElementById(id);
const canvas = $("plot");
const ctx = canvas.getContext("2d");

let x = [];
let released = [];

function square() {
  x = [[0, 0], [0, 1], [1, 0], [1, 1]];
  released = [];
}

const num = (id) => parseFloat($(id).value);
const flat = (pts) => new Float64Array(pts.flat());

function toScreen([u, v]) {
  const s = canvas.width / (VIEW.hi - VIEW.lo);
  return [(u - VIEW.lo) * s, canvas.height - (v - VIEW.lo) * s];
}

function fromScreen(px, py) {
  const s = canvas.width / (VIEW.hi - VIEW.lo);
  return [px / s + VIEW.lo, (canvas.height - py) / s + VIEW.lo];
}

function neighbor() {
  const dx = num("dx");
  const dy = num("dy");
  return x.map(([u, v]) => [u + dx, v + dy]);
}

function probe() {
  return { lo: [num("klx"), num("kly")], hi: [num("khx"), num("khy")] };
}

function dots(pts, color, r) {
  ctx.fillStyle = color;
  for (const p of pts) {
    const [a, b] = toScreen(p);
    ctx.beginPath();
    ctx.arc(a, b, r, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function draw() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#eee";
  for (let t = Math.ceil(VIEW.lo); t <= VIEW.hi; t++) {
    const [a] = toScreen([t, 0]);
    const [, b] = toScreen([0, t]);
    ctx.beginPath(); ctx.moveTo(a, 0); ctx.lineTo(a, canvas.height); ctx.stroke();
    ctx.beginPath(); ctx.moveTo(0, b); ctx.lineTo(canvas.width, b); ctx.stroke();
  }
  const k = probe();
  const [a0, b0] = toScreen(k.lo);
  const [a1, b1] = toScreen(k.hi);
  ctx.setLineDash([5, 4]);
  ctx.strokeStyle = "#555";
  ctx.strokeRect(Math.min(a0, a1), Math.min(b0, b1), Math.abs(a1 - a0), Math.abs(b1 - b0));
  ctx.setLineDash([]);
  dots(neighbor(), "#aac", 4);
  released.forEach((pts, i) => dots(pts, COLORS[i % COLORS.length], 4));
  dots(x, "#1f77b4", 6);
}

function show(id, value) {
  $(id).textContent = typeof value === "number" ? value.toPrecision(6) : value;
}

function guarded(fn) {
  try {
    fn();
    $("status").textContent = "";
    $("status").className = "";
  } catch (e) {
    $("status").textContent = String(e);
    $("status").className = "err";
  }
}

function doRelease() {
  guarded(() => {
    released = [];
    const lines = [];
    const runs = Math.max(1, Math.min(50, Math.floor(num("runs"))));
    for (let run = 0; run < runs; run++) {
      const out = release(flat(x), 2, num("eps"), BigInt(Math.floor(num("seed"))), BigInt(run));
      const pts = [];
      for (let i = 2; i < out.length; i += 2) pts.push([out[i], out[i + 1]]);
      released.push(pts);
      lines.push(`run ${run}: ${hausdorff(flat(x), flat(pts), 2).toPrecision(6)}`);
    }
    $("dist").innerHTML = lines.join("<br>");
  });
  draw();
}

function refresh() {
  guarded(() => {
    if (x.length === 0) return;
    show("dxy", hausdorff(flat(x), flat(neighbor()), 2));
    const k = probe();
    const [tx, ty, bound] = capacities(flat(x), flat(neighbor()), new Float64Array(k.lo), new Float64Array(k.hi), num("eps"));
    show("tx", tx);
    show("ty", ty);
    const lo = Math.min(tx, ty);
    show("ratio", lo > 0 ? Math.max(tx, ty) / lo : "undefined");
    show("bound", bound);
  });
  draw();
}

canvas.addEventListener("click", (ev) => {
  const p = fromScreen(ev.offsetX, ev.offsetY);
  if (ev.shiftKey) {
    if (x.length <= 1) return;
    let best = 0;
    x.forEach((q, i) => {
      if (Math.hypot(q[0] - p[0], q[1] - p[1]) < Math.hypot(x[best][0] - p[0], x[best][1] - p[1])) best = i;
    });
    x.splice(best, 1);
  } else if (x.length < 20) {
    x.push(p.map((c) => Math.round(c * 100) / 100));
  }
  released = [];
  $("dist").textContent = "";
  refresh();
});

canvas.addEventListener("contextmenu", (ev) => {
  ev.preventDefault();
  const [u, v] = fromScreen(ev.offsetX, ev.offsetY);
  const k = probe();
  const w = (k.hi[0] - k.lo[0]) / 2;
  const h = (k.hi[1] - k.lo[1]) / 2;
  const r = (t) => (Math.round(t * 100) / 100).toString();
  $("klx").value = r(u - w); $("khx").value = r(u + w);
  $("kly").value = r(v - h); $("khy").value = r(v + h);
  refresh();
});

for (const id of ["eps", "dx", "dy", "klx", "kly", "khx", "khy"]) $(id).addEventListener("input", refresh);
$("release").addEventListener("click", doRelease);
$("reset").addEventListener("click", () => { square(); $("dist").textContent = ""; refresh(); });

await init();
square();
refresh();
