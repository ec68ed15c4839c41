// Built with `wasm-pack build crates/wasm --target web --out-dir www/pkg`.
import init, { analyze, convert, search_pattern } from "./pkg/shiftkit_wasm.js";

const PRESETS = {
  star: "1 2\n1 3\n1 4\n1 5\n",
  cycle: "1 2\n2 3\n3 4\n4 1\n",
};

const $ = (id) => document.getElementById(id);

function show(id, fn) {
  const out = $(id);
  out.classList.remove("error");
  try {
    return fn(out);
  } catch (e) {
    out.classList.add("error");
    out.textContent = String(e);
  }
}

// Positive entries shade red and negative ones blue.
function heatmap(canvas, rows) {
  const ctx = canvas.getContext("2d");
  const n = rows.length;
  const cell = canvas.width / n;
  const peak = Math.max(1e-12, ...rows.flat().map(Math.abs));
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  rows.forEach((row, i) =>
    row.forEach((v, j) => {
      const t = Math.min(1, Math.abs(v) / peak);
      const fade = Math.round(255 * (1 - t));
      ctx.fillStyle = v >= 0 ? `rgb(255,${fade},${fade})` : `rgb(${fade},${fade},255)`;
      ctx.fillRect(j * cell, i * cell, cell, cell);
      ctx.strokeStyle = "#ddd";
      ctx.strokeRect(j * cell, i * cell, cell, cell);
    }),
  );
}

function wire() {
  $("preset").onchange = () => ($("edges").value = PRESETS[$("preset").value]);
  $("edges").value = PRESETS.star;

  $("analyze").onclick = () =>
    show("analyze-out", (out) => {
      const r = JSON.parse(analyze($("edges").value));
      out.textContent =
        `characteristic: ${r.shift.char_poly.display}\n` +
        `minimal:        ${r.shift.min_poly.display}\n` +
        `shift-enabled:  ${r.shift.shift_enabled}\n` +
        `eigenvalues:    ${r.eigenvalues.map((x) => x.toFixed(4)).join(", ")}`;
    });

  $("convert").onclick = () =>
    show("convert-out", (out) => {
      const eps = $("epsilon").value.trim();
      const r = JSON.parse(convert($("edges").value, $("filter").value, eps === "" ? undefined : Number(eps)));
      if ($("filter").value.trim() === "") $("filter").value = r.filter.map((row) => row.join(" ")).join("\n");
      heatmap($("before"), r.original);
      heatmap($("after"), r.converted);
      out.textContent =
        `epsilon ${r.epsilon}, shift-enabled ${r.shift_enabled}, commutes ${r.commutes_with_h}\n` +
        `same graph: strict ${r.strict_same_graph}, loose ${r.loose_same_graph}\n` +
        `density ${r.density_original.toFixed(3)} -> ${r.density_converted.toFixed(3)}, ` +
        `recovery residual ${r.recovery_residual}`;
    });

  $("search").onclick = () =>
    show("search-out", (out) => {
      const r = JSON.parse(search_pattern($("edges").value, $("mode").value, Number($("trials").value), Number($("seed").value)));
      const s = r.search;
      let text = `outcome: ${s.outcome}`;
      if (s.family_dimension != null) text += `, family dimension ${s.family_dimension}`;
      if (s.certificate) text += `\ncertificate: ${s.certificate.kind} (replays: ${s.certificate.replay_ok})`;
      if (s.found_matrix) text += "\n" + s.found_matrix.map((row) => row.join("\t")).join("\n");
      out.textContent = text;
    });
}

init().then(wire);
