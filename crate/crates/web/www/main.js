import init, { classification_table, simulate, period_bounds } from "./pkg/wright_hopf_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function source() {
  return [$("preset").value, num("b"), num("c")];
}

function plot(canvas, series, opts = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const pad = 40;
  let xs = [], ys = [];
  for (const s of series) {
    s.x.forEach((v, i) => {
      if (s.y[i] !== null && Number.isFinite(s.y[i])) { xs.push(v); ys.push(s.y[i]); }
    });
  }
  if (!xs.length) return;
  const x0 = Math.min(...xs), x1 = Math.max(...xs);
  let y0 = Math.min(...ys), y1 = Math.max(...ys);
  if (opts.extraY !== undefined) { y0 = Math.min(y0, opts.extraY); y1 = Math.max(y1, opts.extraY); }
  if (y1 - y0 < 1e-12) { y0 -= 1; y1 += 1; }
  const px = (x) => pad + (x - x0) / (x1 - x0 || 1) * (w - 2 * pad);
  const py = (y) => h - pad + (y - y0) / (y1 - y0) * (2 * pad - h);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(y1.toPrecision(4), 2, pad + 4);
  ctx.fillText(y0.toPrecision(4), 2, h - pad + 4);
  ctx.fillText(x0.toPrecision(3), pad, h - pad + 14);
  ctx.fillText(x1.toPrecision(3), w - pad - 30, h - pad + 14);

  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.setLineDash(s.dash || []);
    ctx.beginPath();
    let pen = false;
    s.x.forEach((x, i) => {
      const y = s.y[i];
      if (y === null || !Number.isFinite(y)) { pen = false; return; }
      pen ? ctx.lineTo(px(x), py(y)) : ctx.moveTo(px(x), py(y));
      pen = true;
    });
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

function showError(e) {
  $("error").textContent = e ? String(e.message || e) : "";
}

function drawTable() {
  const t = JSON.parse(classification_table(...source(), num("kmin"), num("kmax")));
  $("case").textContent = `B = ${t.b.toPrecision(6)}, C = ${t.c.toPrecision(6)}: ${t.case}` +
    (t.n === null ? "" : `, n = ${t.n}`);
  const head = "<tr><th>k</th><th>&mu;<sub>k</sub></th><th>direction</th><th>side</th><th>H(k)</th><th>K</th></tr>";
  $("table").innerHTML = head + t.rows.map((r) =>
    `<tr><td>${r.k}</td><td>${r.mu_k.toFixed(5)}</td>` +
    `<td class="${r.direction === "subcritical" ? "sub" : "super"}">${r.direction}</td>` +
    `<td>${r.branch_side ?? ""}</td><td>${r.threshold.toFixed(6)}</td><td>${r.k_coefficient.toExponential(3)}</td></tr>`
  ).join("");
}

function drawTrajectory() {
  const s = JSON.parse(simulate(...source(), num("mu"), num("amp"), num("tend"), num("m")));
  plot($("traj"), [{ x: s.t, y: s.x, color: "#257" }], { extraY: 0 });
}

function drawBounds() {
  const k = num("kb");
  const c = JSON.parse(period_bounds(...source(), k, num("etamax"), 200));
  $("bsource").textContent = `branch ${c.k} is ${c.direction}` + (c.source ? `; bounds from ${c.source}` : "; no bound applies");
  const t0 = 4 / (4 * k + 1);
  plot($("bounds"), [
    { x: c.eta, y: c.lower, color: "#257" },
    { x: c.eta, y: c.upper, color: "#b22" },
    { x: c.eta, y: c.eta.map(() => t0), color: "#999", dash: [4, 4] },
  ]);
}

function refresh(which) {
  showError(null);
  for (const f of which) {
    try { f(); } catch (e) { showError(e); }
  }
}

await init();
const all = [drawTable, drawTrajectory, drawBounds];
for (const id of ["preset", "b", "c"]) $(id).addEventListener("input", () => refresh(all));
for (const id of ["kmin", "kmax"]) $(id).addEventListener("input", () => refresh([drawTable]));
for (const id of ["mu", "amp", "tend", "m"]) $(id).addEventListener("input", () => refresh([drawTrajectory]));
for (const id of ["kb", "etamax"]) $(id).addEventListener("input", () => refresh([drawBounds]));
refresh(all);
