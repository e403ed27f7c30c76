import init, { phase_diagram, bounds, Simulation } from "./pkg/interaction_minimiser_wasm.js";

const $ = (id) => document.getElementById(id);

function params() {
  const text = $("sim-params").value.trim();
  if (text === "") return new Float64Array();
  return new Float64Array(text.split(/[\s,]+/).map(Number));
}

const defaults = { morse: "1.5, 1, 0.5, 1", power_law: "2, 0", gaussian_bump: "" };
$("sim-family").addEventListener("change", (e) => {
  $("sim-params").value = defaults[e.target.value];
});

function drawPhaseDiagram() {
  const steps = Number($("pd-steps").value);
  const dim = Number($("pd-dim").value);
  const canvas = $("pd-canvas");
  const ctx = canvas.getContext("2d");
  let cells;
  try {
    cells = JSON.parse(phase_diagram(dim, steps, steps));
  } catch (e) {
    $("pd-status").textContent = String(e);
    $("pd-status").className = "err";
    return;
  }
  const w = canvas.width / steps;
  const h = canvas.height / steps;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  let disagree = 0;
  for (const c of cells) {
    const x = c.i * w;
    const y = canvas.height - (c.j + 1) * h;
    ctx.fillStyle = c.unstable ? "#d9534f" : "#4a78c2";
    ctx.fillRect(x, y, Math.ceil(w), Math.ceil(h));
    if (c.unstable !== c.criterion) {
      disagree += 1;
      ctx.fillStyle = "#000";
      ctx.beginPath();
      ctx.arc(x + w / 2, y + h / 2, Math.max(1.5, w / 5), 0, 2 * Math.PI);
      ctx.fill();
    }
  }
  $("pd-status").className = "";
  $("pd-status").textContent = `${cells.length} cells, ${disagree} disagree`;
}

let sim = null;
let running = false;

function drawParticles() {
  const canvas = $("sim-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const d = sim.dim();
  const x = sim.positions();
  const n = x.length / d;
  let cx = 0, cy = 0;
  for (let i = 0; i < n; i++) {
    cx += x[i * d];
    cy += d > 1 ? x[i * d + 1] : 0;
  }
  cx /= n;
  cy /= n;
  let extent = 1e-9;
  for (let i = 0; i < n; i++) {
    extent = Math.max(extent, Math.abs(x[i * d] - cx), d > 1 ? Math.abs(x[i * d + 1] - cy) : 0);
  }
  const scale = (0.45 * canvas.width) / extent;
  ctx.fillStyle = "#333";
  for (let i = 0; i < n; i++) {
    const px = canvas.width / 2 + (x[i * d] - cx) * scale;
    const py = canvas.height / 2 - (d > 1 ? x[i * d + 1] - cy : 0) * scale;
    ctx.fillRect(px - 1.5, py - 1.5, 3, 3);
  }
  $("sim-status").textContent =
    `iterations  ${sim.iterations()}\n` +
    `energy      ${sim.energy().toPrecision(10)}\n` +
    `grad norm   ${sim.grad_norm().toExponential(3)}\n` +
    `diameter    ${sim.diameter().toPrecision(6)}\n` +
    `view width  ${(2 * extent).toPrecision(4)}`;
}

function frame() {
  if (!running || !sim) return;
  const accepted = sim.step(20);
  drawParticles();
  if (accepted === 0) {
    running = false;
    $("sim-status").textContent += "\nstopped (converged or stalled)";
    return;
  }
  requestAnimationFrame(frame);
}

function startSimulation() {
  running = false;
  $("sim-cert").textContent = "";
  try {
    sim = new Simulation(
      $("sim-family").value,
      params(),
      2,
      Number($("sim-n").value),
      BigInt($("sim-seed").value || 0),
      Number($("sim-radius").value),
    );
  } catch (e) {
    sim = null;
    $("sim-status").textContent = String(e);
    return;
  }
  running = true;
  requestAnimationFrame(frame);
}

function certify() {
  if (!sim) return;
  try {
    const c = JSON.parse(sim.certificate());
    $("sim-cert").textContent = JSON.stringify(
      { passes: c.passes, violations: c.violations, diameter: c.diameter, k: c.k, el_residual_max: c.el_residual_max },
      null,
      2,
    );
  } catch (e) {
    $("sim-cert").textContent = String(e);
  }
}

function computeBounds() {
  try {
    const b = JSON.parse(bounds($("sim-family").value, params(), Number($("b-dim").value)));
    $("b-out").textContent = JSON.stringify(b, null, 2);
  } catch (e) {
    $("b-out").textContent = String(e);
  }
}

await init();
$("pd-run").addEventListener("click", drawPhaseDiagram);
$("sim-start").addEventListener("click", startSimulation);
$("sim-pause").addEventListener("click", () => {
  running = !running;
  if (running) requestAnimationFrame(frame);
});
$("sim-certify").addEventListener("click", certify);
$("b-run").addEventListener("click", computeBounds);
drawPhaseDiagram();
