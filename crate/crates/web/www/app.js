import init, { graphReport, fixtureFiles, chainReport, nilpotentPairReport } from "./pkg/coupled_web.js";

const $ = (id) => document.getElementById(id);

function show(id, f) {
  const out = $(id);
  try {
    out.className = "";
    out.textContent = f();
  } catch (e) {
    out.className = "err";
    out.textContent = String(e.message ?? e);
  }
}

function pretty(text) {
  return JSON.stringify(JSON.parse(text), null, 2);
}

await init();

$("load-fig").onclick = () => {
  const files = JSON.parse(fixtureFiles("figure1_pair", ""));
  $("ga").value = JSON.stringify(files.A);
  $("gb").value = JSON.stringify(files.B);
};

$("run-graph").onclick = () =>
  show("graph-out", () => {
    const r = JSON.parse(graphReport($("ga").value, $("gb").value));
    const edges = (g) => g.edges.map(([i, j]) => `${i}->${j}`).join(" ") || "none";
    const lines = [`D(A): ${edges(r["D(A)"])}  strongly connected: ${r["scc(A)"].strongly_connected}`];
    if (r["D(B)"]) {
      lines.push(`D(B): ${edges(r["D(B)"])}  strongly connected: ${r["scc(B)"].strongly_connected}`);
      const g = r["G(A,B)"];
      lines.push(`G(A,B): ${g.edges.map(([i, j]) => `${i}-${j}`).join(" ") || "none"}  connected: ${g.connected}`);
    }
    return lines.join("\n") + "\n\n" + r.dot;
  });

$("run-chain").onclick = () =>
  show("chain-out", () => {
    const r = JSON.parse(chainReport($("kind").value, $("dims").value));
    const s = r.verdict.spectrum;
    return `reducible: ${s.reducible}\nproperly reducible: ${s.proper}\nstrongly reducible: ${s.strong}\n\n` +
      pretty(JSON.stringify(r.verdict.witness));
  });

$("run-pair").onclick = () =>
  show("pair-out", () => pretty(nilpotentPairReport($("pa").value, $("pb").value, $("pc").value, $("pd").value)));
