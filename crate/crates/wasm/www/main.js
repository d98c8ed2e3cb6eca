import init, { simulate, compare_boundaries, convergence } from "./pkg/dynwave_wasm.js";

const $ = (id) => document.getElementById(id);
const status = $("status");

function setStatus(text, isError = false) {
  status.textContent = text;
  status.className = isError ? "error" : "";
}

function params() {
  return {
    nonlinearity: $("nonlinearity").value,
    preset: $("preset").value,
    boundary: $("boundary").value,
    length: Number($("length").value),
    finalTime: Number($("final-time").value),
    intervals: Number($("intervals").value),
    steps: Number($("steps").value),
  };
}

function extent(values) {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

// Axes with a margin for tick labels; returns data-to-pixel maps.
function frame(canvas, xr, yr, xlabel, ylabel) {
  const ctx = canvas.getContext("2d");
  const m = { l: 62, r: 12, t: 12, b: 36 };
  const w = canvas.width - m.l - m.r;
  const h = canvas.height - m.t - m.b;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(m.l, m.t, w, h);
  ctx.fillStyle = "#444";
  ctx.font = "11px system-ui";
  const fx = (x) => m.l + ((x - xr[0]) / (xr[1] - xr[0])) * w;
  const fy = (y) => m.t + h - ((y - yr[0]) / (yr[1] - yr[0])) * h;
  for (let i = 0; i <= 4; i++) {
    const xv = xr[0] + ((xr[1] - xr[0]) * i) / 4;
    const yv = yr[0] + ((yr[1] - yr[0]) * i) / 4;
    ctx.textAlign = "center";
    ctx.fillText(formatTick(xv), fx(xv), m.t + h + 14);
    ctx.textAlign = "right";
    ctx.fillText(formatTick(yv), m.l - 4, fy(yv) + 4);
  }
  ctx.textAlign = "center";
  ctx.fillText(xlabel, m.l + w / 2, canvas.height - 4);
  ctx.save();
  ctx.translate(12, m.t + h / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(ylabel, 0, 0);
  ctx.restore();
  return { ctx, fx, fy };
}

function formatTick(v) {
  const a = Math.abs(v);
  if (a !== 0 && (a < 1e-2 || a >= 1e4)) return v.toExponential(1);
  return Number(v.toPrecision(4)).toString();
}

function polyline(ctx, fx, fy, xs, ys, color, dash = []) {
  ctx.strokeStyle = color;
  ctx.setLineDash(dash);
  ctx.beginPath();
  xs.forEach((x, i) => (i === 0 ? ctx.moveTo(fx(x), fy(ys[i])) : ctx.lineTo(fx(x), fy(ys[i]))));
  ctx.stroke();
  ctx.setLineDash([]);
}

function drawWaterfall(sim) {
  const x = sim.x();
  const n = sim.nodes();
  const frames = sim.frames();
  const times = sim.frame_times();
  const count = times.length;
  const [lo, hi] = extent(frames);
  const amplitude = hi - lo;
  const lift = amplitude * 0.35;
  const yr = [lo, hi + lift * (count - 1)];
  const { ctx, fx, fy } = frame($("waterfall"), [x[0], x[n - 1]], yr, "x", "U + offset(t)");
  for (let i = count - 1; i >= 0; i--) {
    const ys = Array.from(frames.subarray(i * n, (i + 1) * n), (v) => v + lift * i);
    ctx.fillStyle = "#fff";
    ctx.beginPath();
    ctx.moveTo(fx(x[0]), fy(yr[0]));
    x.forEach((xv, k) => ctx.lineTo(fx(xv), fy(ys[k])));
    ctx.lineTo(fx(x[n - 1]), fy(yr[0]));
    ctx.fill();
    polyline(ctx, fx, fy, x, ys, `hsl(${210 - (150 * i) / Math.max(1, count - 1)}, 60%, 40%)`);
  }
}

function drawEnergy(sim) {
  const t = sim.energy_times();
  const j = sim.energy();
  const mean = j.reduce((a, b) => a + b, 0) / j.length;
  const spread = Math.max(1e-3 * Math.max(1, Math.abs(mean)), ...extent(j).map((v) => Math.abs(v - mean)));
  const { ctx, fx, fy } = frame($("energy"), extent(t), [mean - spread, mean + spread], "t", "J");
  polyline(ctx, fx, fy, t, j, "#c0392b");
}

function drawTraces(cmp) {
  const t = cmp.times();
  const series = [
    [cmp.dynamic_left(), "#1f77b4", []],
    [cmp.dynamic_right(), "#2ca02c", []],
    [cmp.neumann_left(), "#1f77b4", [6, 4]],
    [cmp.neumann_right(), "#2ca02c", [6, 4]],
  ];
  const yr = extent(series.flatMap(([v]) => Array.from(v)));
  const { ctx, fx, fy } = frame($("traces"), extent(t), yr, "t", "u at x = 0 (blue), x = L (green)");
  for (const [v, color, dash] of series) polyline(ctx, fx, fy, t, v, color, dash);
}

function drawConvergence(table) {
  const dx = Array.from(table.dx(), Math.log10);
  const err = Array.from(table.errors(), Math.log10);
  const xr = extent(dx);
  const guide = dx.map((d) => err[err.length - 1] + 2 * (d - dx[dx.length - 1]));
  const yr = extent([...err, ...guide]);
  const { ctx, fx, fy } = frame($("loglog"), xr, yr, "log10 Δx", "log10 error");
  polyline(ctx, fx, fy, dx, guide, "#aaa", [4, 4]);
  polyline(ctx, fx, fy, dx, err, "#8e44ad");
  ctx.fillStyle = "#8e44ad";
  dx.forEach((d, i) => ctx.fillRect(fx(d) - 3, fy(err[i]) - 3, 6, 6));

  const orders = table.orders();
  const rows = Array.from(table.dx(), (d, i) =>
    `<tr><td>${d.toExponential(3)}</td><td>${table.errors()[i].toExponential(3)}</td>` +
    `<td>${Number.isNaN(orders[i]) ? "–" : orders[i].toFixed(3)}</td></tr>`);
  $("orders").innerHTML = "<tr><th>Δx</th><th>error</th><th>order</th></tr>" + rows.join("");
}

// Let the status text paint before a long synchronous solve.
function later(task) {
  return new Promise((resolve) => setTimeout(() => resolve(task()), 20));
}

async function guarded(label, task) {
  setStatus(`${label}…`);
  const start = performance.now();
  try {
    const message = await later(task);
    setStatus(`${message} (${((performance.now() - start) / 1000).toFixed(2)} s)`);
  } catch (err) {
    setStatus(String(err.message ?? err), true);
  }
}

function runSimulate() {
  return guarded("simulating", () => {
    const p = params();
    const sim = simulate(p.nonlinearity, p.preset, p.boundary, p.intervals, p.steps, p.length, p.finalTime, 40);
    drawWaterfall(sim);
    drawEnergy(sim);
    return `relative energy drift ${sim.drift().toExponential(2)}, at most ${sim.max_iterations()} fixed-point iterations per step`;
  });
}

function runCompare() {
  return guarded("comparing boundary conditions", () => {
    const p = params();
    drawTraces(compare_boundaries(p.nonlinearity, p.preset, p.intervals, p.steps, p.length, p.finalTime));
    return "boundary traces updated";
  });
}

function runConvergence() {
  return guarded("running convergence study", () => {
    const p = params();
    const table = convergence(p.nonlinearity, p.preset, 25, 100, Math.min(p.finalTime, 1), 4);
    drawConvergence(table);
    const orders = table.orders();
    return `observed order on the finest pair ${orders[orders.length - 1].toFixed(3)}`;
  });
}

await init();
$("run-simulate").addEventListener("click", runSimulate);
$("run-compare").addEventListener("click", runCompare);
$("run-convergence").addEventListener("click", runConvergence);
await runSimulate();
