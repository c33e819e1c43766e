export * from "./csv.js";
export * from "./svg.js";
export * from "./panels.js";
export { renderAll } from "./render_figures.js";
