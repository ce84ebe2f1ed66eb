import init, { tailComparison, couplingFrequencies, samplingOperatorNorms } from "./pkg/matrix_bernstein_demo.js";

const num = (id) => Number(document.getElementById(id).value);
const big = (id) => BigInt(document.getElementById(id).value);
const PAD = 40;

function frame(ctx, w, h, xmax, ymax) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(PAD, 10);
  ctx.lineTo(PAD, h - PAD);
  ctx.lineTo(w - 10, h - PAD);
  ctx.stroke();
  ctx.fillStyle = "#555";
  ctx.fillText("0", PAD - 12, h - PAD + 12);
  ctx.fillText(ymax.toPrecision(3), 2, 16);
  ctx.fillText(xmax.toPrecision(3), w - 40, h - PAD + 14);
  return {
    x: (v) => PAD + (v / xmax) * (w - PAD - 10),
    y: (v) => h - PAD - (v / ymax) * (h - PAD - 10),
  };
}

function line(ctx, xs, ys, color, s) {
  ctx.strokeStyle = color;
  ctx.lineWidth = 2;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(s.x(x), s.y(ys[i])) : ctx.moveTo(s.x(x), s.y(ys[i]))));
  ctx.stroke();
  ctx.lineWidth = 1;
}

function guarded(msgId, f) {
  const msg = document.getElementById(msgId);
  msg.className = "";
  msg.textContent = "running...";
  setTimeout(() => {
    try {
      msg.textContent = f();
    } catch (e) {
      msg.className = "err";
      msg.textContent = String(e.message ?? e);
    }
  }, 10);
}

function runTail() {
  guarded("t-msg", () => {
    const out = tailComparison(num("t-dim"), num("t-size"), big("t-seed"), num("t-m"), num("t-trials"), big("t-seed") + 1n, 40);
    const t = [], iid = [], nr = [], bound = [];
    for (let i = 0; i < out.length; i += 4) {
      t.push(out[i]); iid.push(out[i + 1]); nr.push(out[i + 2]); bound.push(out[i + 3]);
    }
    const c = document.getElementById("t-canvas");
    const ctx = c.getContext("2d");
    const s = frame(ctx, c.width, c.height, t[t.length - 1] || 1, 1);
    line(ctx, t, bound, "#333", s);
    line(ctx, t, iid, "#1f77b4", s);
    line(ctx, t, nr, "#d62728", s);
    const below = nr.filter((p, i) => p <= iid[i] + 1e-12).length;
    return `t ranges over [0, m c]. Without-replacement tail at or below the i.i.d. tail at ${below} of ${t.length} points.`;
  });
}

function runCoupling() {
  guarded("c-msg", () => {
    const size = num("c-size"), m = num("c-m");
    const f = couplingFrequencies(size, m, num("c-trials"), big("c-seed"));
    const c = document.getElementById("c-canvas");
    const ctx = c.getContext("2d");
    const uniform = 1 / f.length;
    const ymax = Math.max(...f, uniform) * 1.2;
    const s = frame(ctx, c.width, c.height, f.length, ymax);
    ctx.fillStyle = "#2ca02c";
    const bw = Math.max(1, s.x(1) - s.x(0) - 1);
    f.forEach((p, i) => ctx.fillRect(s.x(i), s.y(p), bw, s.y(0) - s.y(p)));
    ctx.strokeStyle = "#333";
    ctx.beginPath();
    ctx.moveTo(s.x(0), s.y(uniform));
    ctx.lineTo(s.x(f.length), s.y(uniform));
    ctx.stroke();
    const worst = Math.max(...Array.from(f, (p) => Math.abs(p - uniform)));
    return `${f.length} outcomes, max |frequency - 1/|C|^m| = ${worst.toExponential(2)}`;
  });
}

function runOperator() {
  guarded("s-msg", () => {
    const n = num("s-n"), m = num("s-m");
    const norms = samplingOperatorNorms(n, m, document.getElementById("s-mode").value, num("s-trials"), big("s-seed"));
    const counts = new Map();
    for (const v of norms) {
      const k = Number(v.toFixed(6));
      counts.set(k, (counts.get(k) ?? 0) + 1);
    }
    const keys = [...counts.keys()].sort((a, b) => a - b);
    const c = document.getElementById("s-canvas");
    const ctx = c.getContext("2d");
    const xmax = Math.max(...keys) * 1.1 || 1;
    const ymax = Math.max(...counts.values());
    const s = frame(ctx, c.width, c.height, xmax, ymax);
    ctx.fillStyle = "#9467bd";
    for (const k of keys) {
      ctx.fillRect(s.x(k) - 3, s.y(counts.get(k)), 6, s.y(0) - s.y(counts.get(k)));
      ctx.fillText(String(k), s.x(k) - 4, c.height - PAD + 26);
    }
    return `‖(m/n²) R‖ over ${norms.length} draws: min ${Math.min(...norms)}, max ${Math.max(...norms)} (worst case m = ${m})`;
  });
}

await init();
document.getElementById("t-run").onclick = runTail;
document.getElementById("c-run").onclick = runCoupling;
document.getElementById("s-run").onclick = runOperator;
runTail();
runCoupling();
runOperator();
