import init, { annulusComparison, robnikWavefunction, variationalConvergence, version } from "./pkg/ringspec_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

// Runs a wasm call after the status text has painted; wasm errors arrive as strings.
function run(statusId, job) {
  const status = $(statusId);
  status.className = "status";
  status.textContent = "computing…";
  setTimeout(() => {
    const t0 = performance.now();
    try {
      job();
      status.textContent = `${(performance.now() - t0).toFixed(0)} ms`;
    } catch (e) {
      status.className = "status error";
      status.textContent = String(e);
    }
  }, 20);
}

function axes(ctx, w, h, pad, xr, yr, xlabel, ylabel) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#888";
  ctx.strokeRect(pad, pad / 2, w - 1.5 * pad, h - 1.5 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(xlabel, w / 2, h - 4);
  ctx.fillText(ylabel, 4, 12);
  ctx.fillText(yr[1].toPrecision(4), 4, pad / 2 + 10);
  ctx.fillText(yr[0].toPrecision(4), 4, h - pad);
  ctx.fillText(String(xr[1]), w - pad, h - pad + 14);
  const sx = (x) => pad + ((x - xr[0]) / (xr[1] - xr[0])) * (w - 1.5 * pad);
  const sy = (y) => h - pad - ((y - yr[0]) / (yr[1] - yr[0])) * (h - 1.5 * pad);
  return [sx, sy];
}

function line(ctx, xs, ys, sx, sy, color) {
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(sx(x), sy(ys[i])) : ctx.moveTo(sx(x), sy(ys[i]))));
  ctx.stroke();
}

function annulus() {
  const rows = JSON.parse(annulusComparison(num("ann-a"), num("ann-n")));
  const n = rows.map((r) => r.index);
  const top = Math.max(...rows.map((r) => Math.max(r.exact, r.analytic, r.weyl)));
  let c = $("ann-plot"), ctx = c.getContext("2d");
  let [sx, sy] = axes(ctx, c.width, c.height, 40, [0, n.length], [0, top], "state index", "energy");
  line(ctx, n, rows.map((r) => r.weyl), sx, sy, "#1f77b4");
  line(ctx, n, rows.map((r) => r.analytic), sx, sy, "#d62728");
  line(ctx, n, rows.map((r) => r.exact), sx, sy, "#000");

  const rel = (v, r) => (100 * (v - r.exact)) / r.exact;
  const ea = rows.map((r) => rel(r.analytic, r)), ew = rows.map((r) => rel(r.weyl, r));
  const lim = Math.max(1e-6, ...ea.map(Math.abs), ...ew.map(Math.abs));
  c = $("ann-err"); ctx = c.getContext("2d");
  [sx, sy] = axes(ctx, c.width, c.height, 40, [0, n.length], [-lim, lim], "state index", "error vs exact (%)");
  line(ctx, [0, n.length], [0, 0], sx, sy, "#ccc");
  line(ctx, n, ew, sx, sy, "#1f77b4");
  line(ctx, n, ea, sx, sy, "#d62728");
}

// Diverging blue-white-red scale for a value in [-1, 1].
function color(t) {
  const a = Math.min(1, Math.abs(t));
  const [r, g, b] = t >= 0 ? [255, 255 * (1 - a), 255 * (1 - a)] : [255 * (1 - a), 255 * (1 - a), 255];
  return `rgb(${r | 0},${g | 0},${b | 0})`;
}

function ring() {
  const w = JSON.parse(robnikWavefunction(num("ring-alpha"), num("ring-lx"), num("ring-ny"), num("ring-state")));
  const c = $("ring-plot"), ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const all = w.outer.concat(w.inner, w.points.map((p) => [p[0], p[1]]));
  const span = 1.05 * Math.max(...all.map((p) => Math.max(Math.abs(p[0]), Math.abs(p[1]))));
  const s = c.width / (2 * span);
  const px = (u) => c.width / 2 + u * s, py = (v) => c.height / 2 - v * s;
  const peak = Math.max(...w.points.map((p) => Math.abs(p[2])));
  // Dot size from the local grid spacing so neighbouring samples touch.
  const dot = Math.max(2, (Math.PI * 2 * s) / (w.ny + 1) * 0.6);
  for (const [u, v, psi] of w.points) {
    ctx.fillStyle = color(psi / peak);
    ctx.beginPath();
    ctx.arc(px(u), py(v), dot, 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.strokeStyle = "#000";
  for (const curve of [w.outer, w.inner]) {
    ctx.beginPath();
    curve.forEach(([u, v], i) => (i ? ctx.lineTo(px(u), py(v)) : ctx.moveTo(px(u), py(v))));
    ctx.stroke();
  }
  const levels = w.energies.map((e, i) => (i === w.state ? `<b>${e.toFixed(4)}</b>` : e.toFixed(4)));
  $("ring-levels").innerHTML = `grid ${w.nx} &times; ${w.ny}; lowest energies: ${levels.join(", ")}`;
}

function variational() {
  const angular = $("var-basis").value === "angular";
  const rows = JSON.parse(variationalConvergence(num("var-alpha"), num("var-lx"), angular, num("var-n")));
  const head = "<tr><th>N</th><th>energy</th><th>change</th></tr>";
  const body = rows
    .map((r, i) => `<tr><td>${r.n}</td><td>${r.energy.toFixed(8)}</td><td>${i ? (r.energy - rows[i - 1].energy).toExponential(2) : ""}</td></tr>`)
    .join("");
  $("var-table").innerHTML = head + body;
}

await init();
$("version").textContent = `ringspec ${version()}`;
$("ann-go").onclick = () => run("ann-status", annulus);
$("ring-go").onclick = () => run("ring-status", ring);
$("var-go").onclick = () => run("var-status", variational);
run("ann-status", annulus);
