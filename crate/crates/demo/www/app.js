import init, { generate, cluster, greyDegree } from "./pkg/sag_dbscan_demo.js";

const PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];
const $ = (id) => document.getElementById(id);
let data = null;

function optional(id) {
  const v = $(id).value.trim();
  return v === "" ? undefined : Number(v);
}

function bounds(xs) {
  let lo = Infinity, hi = -Infinity;
  for (const x of xs) { lo = Math.min(lo, x); hi = Math.max(hi, x); }
  return hi > lo ? [lo, hi] : [lo - 1, hi + 1];
}

function drawScatter(colors, dense) {
  const c = $("scatter"), ctx = c.getContext("2d"), pad = 12;
  ctx.clearRect(0, 0, c.width, c.height);
  const [x0, x1] = bounds(data.xs), [y0, y1] = bounds(data.ys);
  const sx = (x) => pad + (x - x0) / (x1 - x0) * (c.width - 2 * pad);
  const sy = (y) => c.height - pad - (y - y0) / (y1 - y0) * (c.height - 2 * pad);
  for (let i = 0; i < data.xs.length; i++) {
    ctx.beginPath();
    ctx.arc(sx(data.xs[i]), sy(data.ys[i]), 2.5, 0, 2 * Math.PI);
    ctx.fillStyle = colors[i];
    ctx.fill();
    if (dense && !dense[i]) {
      ctx.strokeStyle = "#222";
      ctx.lineWidth = 0.8;
      ctx.stroke();
    }
  }
}

function drawCurves(out) {
  const c = $("curve"), ctx = c.getContext("2d"), pad = 30;
  ctx.clearRect(0, 0, c.width, c.height);
  const rho = out.sortedRho, v = out.smoothed, r = out.residuals, n = rho.length;
  const sx = (i) => pad + (i - 1) / (n - 1) * (c.width - 2 * pad);
  const line = (points, lo, hi, color) => {
    ctx.beginPath();
    points.forEach(([i, y], j) => {
      const py = c.height - pad - (y - lo) / (hi - lo || 1) * (c.height - 2 * pad);
      j ? ctx.lineTo(sx(i), py) : ctx.moveTo(sx(i), py);
    });
    ctx.strokeStyle = color;
    ctx.lineWidth = 1.5;
    ctx.stroke();
  };
  const [rl, rh] = bounds(rho);
  line(Array.from(rho, (y, j) => [j + 1, y]), rl, rh, "#999");
  line(Array.from(v, (y, j) => [j + 5, y]), rl, rh, "#1f77b4");
  const [el, eh] = bounds(r);
  line(Array.from(r, (y, j) => [j + 10, y]), el, eh, "#d62728");
  ctx.strokeStyle = "#222";
  ctx.setLineDash([4, 4]);
  ctx.beginPath();
  ctx.moveTo(sx(out.pStar), pad);
  ctx.lineTo(sx(out.pStar), c.height - pad);
  ctx.stroke();
  ctx.setLineDash([]);
  ctx.fillStyle = "#222";
  ctx.fillText("grey: sorted density   blue: smoothed   red: split score   dashed: chosen split", pad, 16);
}

function onGenerate() {
  try {
    data = generate($("kind").value, Number($("points").value), Number($("noise").value), Number($("seed").value));
    drawScatter(Array.from(data.labels, (l) => PALETTE[l % PALETTE.length]));
    $("curve").getContext("2d").clearRect(0, 0, 560, 420);
    $("status").textContent = `${data.xs.length} points, colored by generator label`;
  } catch (e) {
    $("status").textContent = String(e);
  }
}

function onRun() {
  if (!data) onGenerate();
  try {
    const t = performance.now();
    const out = cluster(data.xs, data.ys, data.labels, optional("k"), optional("m"), $("grey").checked);
    const ms = (performance.now() - t).toFixed(0);
    const clusters = out.clusters;
    drawScatter(Array.from(clusters, (l) => PALETTE[l % PALETTE.length]), out.dense);
    drawCurves(out);
    const dense = out.dense.reduce((a, b) => a + b, 0);
    $("status").textContent =
      `clusters ${out.clusterCount}   dense subset ${dense} of ${clusters.length}   split ${out.pStar}\n` +
      `k ${out.k}   m ${out.m}   eps ${out.eps.toPrecision(4)}   ` +
      (out.ari === undefined ? "" : `ARI ${out.ari.toFixed(4)}   `) + `${ms} ms`;
  } catch (e) {
    $("status").textContent = String(e);
  }
}

function onDegree() {
  const parse = (s) => s.split(/[\s,]+/).filter(Boolean).map(Number);
  try {
    $("gout").textContent = greyDegree(parse($("ga").value), parse($("gb").value)).toFixed(6);
  } catch (e) {
    $("gout").textContent = String(e);
  }
}

await init();
$("generate").onclick = onGenerate;
$("run").onclick = onRun;
$("degree").onclick = onDegree;
onGenerate();
