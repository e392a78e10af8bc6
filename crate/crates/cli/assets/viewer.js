// Thin viewer: every visual attribute comes from a GlyphSpec; no layout or
// filtering happens here. Talks to the HTTP server or, in exported bundles,
// to the in-process core module through the same tagged commands.
(() => {
  "use strict";
  const SESSION_ROUTES = { expand: 1, collapse: 1, remove: 1, refresh: 1, preset: 1, move: 1, select: 1, setRelation: "relation", clearHighlight: 1 };

  function serverTransport() {
    const json = (r) => r.json();
    return {
      document: () => fetch("graph").then(json),
      call(cmd) {
        const { op, ...body } = cmd;
        if (op === "meta") return fetch("graph/meta").then(json);
        if (op === "inspect") return fetch("node/" + encodeURIComponent(body.id)).then(json);
        if (op === "layout") return fetch("layout").then(json);
        if (op === "glyphs") return fetch("glyphs" + (body.ids ? "?" + body.ids.map((i) => "id=" + encodeURIComponent(i)).join("&") : "")).then(json);
        if (op === "filter") return fetch("filter", { method: "POST", body: JSON.stringify(body) }).then(json);
        const route = SESSION_ROUTES[op] === 1 ? op : SESSION_ROUTES[op];
        return fetch("session/" + route, { method: "POST", body: JSON.stringify(body) }).then(json);
      },
      subscribe(onSnapshot) {
        new EventSource("layout/stream").addEventListener("layout", (e) => onSnapshot(JSON.parse(e.data)));
      },
    };
  }

  async function bundleTransport() {
    const [wasm, doc] = await Promise.all([
      fetch("core/helgraph_core.wasm").then((r) => r.arrayBuffer()),
      fetch("data/graph.helgraph.json").then((r) => r.arrayBuffer()),
    ]);
    const { instance } = await WebAssembly.instantiate(wasm, {});
    const x = instance.exports;
    const enc = new TextEncoder(), dec = new TextDecoder();
    const send = (fn, bytes) => {
      const ptr = x.hg_alloc(bytes.length);
      new Uint8Array(x.memory.buffer, ptr, bytes.length).set(bytes);
      const n = fn(ptr, bytes.length);
      x.hg_free(ptr, bytes.length);
      return JSON.parse(dec.decode(new Uint8Array(x.memory.buffer, x.hg_result_ptr(), n)));
    };
    send(x.hg_open, new Uint8Array(doc));
    let listener = null;
    return {
      document: async () => JSON.parse(dec.decode(doc)),
      async call(cmd) {
        const out = send(x.hg_call, enc.encode(JSON.stringify(cmd)));
        if (listener && !out.error) listener(send(x.hg_call, enc.encode('{"op":"layout"}')));
        return out;
      },
      subscribe(fn) { listener = fn; },
    };
  }

  const canvas = document.getElementById("diagram");
  const ctx = canvas.getContext("2d");
  const view = { x: 0, y: 0, k: 1 };
  let api, doc, parentOf = {}, names = {}, positions = {}, glyphs = {}, state = null;

  const status = (t) => (document.getElementById("status").textContent = t);
  const toScreen = ([x, y]) => [(x - view.x) * view.k + canvas.width / 2, (y - view.y) * view.k + canvas.height / 2];
  const toWorld = (sx, sy) => [(sx - canvas.width / 2) / view.k + view.x, (sy - canvas.height / 2) / view.k + view.y];

  async function apply(cmd) {
    const out = await api.call(cmd);
    if (out.error) return status(out.error.kind + ": " + out.error.message);
    state = out.state || (out.visible ? out : state);
    glyphs = await api.call({ op: "glyphs" });
    renderTree();
    draw();
    return out;
  }

  function draw() {
    canvas.width = canvas.clientWidth;
    canvas.height = canvas.clientHeight;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    const dimmed = new Set(state ? state.dimmed : []);
    ctx.strokeStyle = "#bbb";
    for (const [id, p] of Object.entries(positions)) {
      const parent = parentOf[id];
      if (parent && positions[parent]) {
        const [a, b] = [toScreen(positions[parent]), toScreen(p)];
        ctx.beginPath(); ctx.moveTo(a[0], a[1]); ctx.lineTo(b[0], b[1]); ctx.stroke();
      }
    }
    for (const [id, p] of Object.entries(positions)) {
      const g = glyphs[id];
      if (!g) continue;
      const [sx, sy] = toScreen(p);
      const r = g.radius * view.k;
      ctx.globalAlpha = dimmed.has(id) ? 0.25 : 1;
      if (g.indicators.includes("collapsedShadow")) { ctx.fillStyle = "#0003"; disc(sx + 3, sy + 3, r); }
      if (g.donut) ring(sx, sy, r, g.donut);
      ctx.fillStyle = g.iconStyle === "filled" ? g.fillColor : "#fff";
      ctx.strokeStyle = g.fillColor;
      ctx.setLineDash(g.contour === "hexagonDashed" ? [3, 2] : []);
      disc(sx, sy, r); ctx.lineWidth = g.contour === "octagonSolid" ? 3 : 1.5; ctx.stroke();
      ctx.setLineDash([]); ctx.lineWidth = 1;
      if (g.effect !== "none") { ctx.fillStyle = g.effect === "fire" ? "#e33" : "#888"; disc(sx + r, sy - r, 3); }
      if (g.indicators.includes("subtreeError")) { ctx.fillStyle = "#e33"; disc(sx - r, sy - r, 2.5); }
      else if (g.indicators.includes("subtreeWarning")) { ctx.fillStyle = "#e90"; disc(sx - r, sy - r, 2.5); }
      if (state && state.selection === id) { ctx.strokeStyle = "#06f"; ctx.lineWidth = 2; ctx.beginPath(); ctx.arc(sx, sy, r + 4, 0, 7); ctx.stroke(); ctx.lineWidth = 1; }
      ctx.fillStyle = "#222";
      ctx.fillText(names[id] || id, sx + r + 4, sy + 4);
    }
    ctx.globalAlpha = 1;
  }

  function disc(x, y, r) { ctx.beginPath(); ctx.arc(x, y, r, 0, 2 * Math.PI); ctx.fill(); }
  function ring(x, y, r, d) {
    const w = d.width * view.k, split = d.staticFraction * 2 * Math.PI;
    ctx.lineWidth = w;
    ctx.strokeStyle = "#555"; ctx.beginPath(); ctx.arc(x, y, r + w / 2, 0, split); ctx.stroke();
    ctx.strokeStyle = "#aaa"; ctx.beginPath(); ctx.arc(x, y, r + w / 2, split, 2 * Math.PI); ctx.stroke();
    ctx.lineWidth = 1;
  }

  function hit(sx, sy) {
    const [wx, wy] = toWorld(sx, sy);
    let best = null, bestD = Infinity;
    for (const [id, [x, y]] of Object.entries(positions)) {
      const d = Math.hypot(x - wx, y - wy);
      const r = (glyphs[id] ? glyphs[id].radius : 5) + 2;
      if (d <= r && d < bestD) { best = id; bestD = d; }
    }
    return best;
  }

  function renderTree() {
    const tree = document.getElementById("tree");
    const visible = new Set(state ? state.visible : []);
    const kids = {};
    for (const [p, c] of doc.relations.declares || []) (kids[p] = kids[p] || []).push(c);
    const rows = [];
    const walk = (id, depth) => {
      rows.push(`<div data-id="${id}" class="${visible.has(id) ? "" : "hidden"}" style="padding-left:${depth * 10}px">${names[id]}</div>`);
      for (const c of kids[id] || []) walk(c, depth + 1);
    };
    doc.entities.filter((e) => !parentOf[e.id]).forEach((e) => walk(e.id, 0));
    tree.innerHTML = rows.join("");
  }

  async function inspect(id) {
    const p = await api.call({ op: "inspect", id });
    document.getElementById("inspect").innerHTML = p.error ? "" :
      `<h3>${p.declaration}</h3><p>${p.comment ? p.comment.summary : ""}</p><pre>${JSON.stringify(p.diagnostics, null, 1)}</pre>`;
  }

  let drag = null;
  canvas.addEventListener("mousedown", (e) => {
    const id = hit(e.offsetX, e.offsetY);
    drag = { id: e.shiftKey ? id : null, x: e.offsetX, y: e.offsetY };
  });
  canvas.addEventListener("mousemove", (e) => {
    if (!drag) return;
    if (drag.id) { positions[drag.id] = toWorld(e.offsetX, e.offsetY); }
    else { view.x -= (e.offsetX - drag.x) / view.k; view.y -= (e.offsetY - drag.y) / view.k; drag.x = e.offsetX; drag.y = e.offsetY; }
    draw();
  });
  canvas.addEventListener("mouseup", async (e) => {
    const d = drag; drag = null;
    if (d && d.id) { const [x, y] = positions[d.id]; return apply({ op: "move", id: d.id, x, y, pin: true }); }
    const id = hit(e.offsetX, e.offsetY);
    if (id && d && d.x === e.offsetX && d.y === e.offsetY) { await apply({ op: "select", id }); inspect(id); }
  });
  canvas.addEventListener("dblclick", (e) => {
    const id = hit(e.offsetX, e.offsetY);
    if (id) apply({ op: state.expanded.includes(id) ? "collapse" : "expand", id });
  });
  canvas.addEventListener("wheel", (e) => { e.preventDefault(); view.k *= Math.exp(-e.deltaY / 500); draw(); });
  document.getElementById("tree").addEventListener("click", (e) => {
    const id = e.target.dataset.id;
    if (id && state.visible.includes(id)) { apply({ op: "select", id }); inspect(id); }
  });
  document.getElementById("preset").addEventListener("change", (e) => apply({ op: "preset", preset: e.target.value }));
  document.getElementById("refresh").addEventListener("click", () => apply({ op: "refresh" }));
  document.getElementById("search").addEventListener("keydown", async (e) => {
    if (e.key !== "Enter") return;
    const text = e.target.value;
    if (!text) return apply({ op: "clearHighlight" });
    const out = await apply({ op: "filter", query: { mode: "fullText", text }, mode: e.shiftKey ? "isolate" : "highlight" });
    if (out && out.matches) status(out.matches.length + " matches");
  });
  document.addEventListener("keydown", (e) => {
    if (e.target.tagName === "INPUT" || !state) return;
    const id = state.selection;
    const key = e.key.toLowerCase();
    if (key === "r") apply({ op: "refresh" });
    if (!id) return;
    if (e.key === "Delete") apply({ op: "remove", id });
    else if (key === "e") apply({ op: "expand", id });
    else if (key === "c") apply({ op: "collapse", id });
    else if (key === "i") apply({ op: "filter", query: { mode: "regex", text: "^" + names[id].replace(/[.*+?^${}()|[\]\\]/g, "\\$&") + "$" }, mode: "isolate" });
  });
  window.addEventListener("resize", draw);

  (async () => {
    api = document.body.dataset.mode === "server" ? serverTransport() : await bundleTransport();
    doc = await api.document();
    for (const e of doc.entities) names[e.id] = e.name;
    for (const [p, c] of doc.relations.declares || []) parentOf[c] = p;
    api.subscribe((snap) => { positions = snap.positions; draw(); });
    positions = (await api.call({ op: "layout" })).positions;
    await apply({ op: "state" });
  })();
})();
