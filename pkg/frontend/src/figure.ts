// Static figure panel. The client deliberately does not ship an
// interactive geometry widget; each problem gets a fixed schematic
// (points spread on a circle, other objects listed beneath) so the
// student can see the cast of objects at a glance.

import type { ProblemSummary } from "./types.js";

const SIZE = 260;
const RADIUS = 95;

export function figureSvg(problem: ProblemSummary): string {
  const visible = new Set(problem.studentFigure);
  const points = problem.objects.filter((o) => o.kind === "point" && visible.has(o.name));
  const others = problem.objects.filter((o) => o.kind !== "point" && visible.has(o.name));

  const cx = SIZE / 2;
  const cy = SIZE / 2;
  const dots = points.map((p, i) => {
    const angle = (2 * Math.PI * i) / Math.max(points.length, 1) - Math.PI / 2;
    const x = (cx + RADIUS * Math.cos(angle)).toFixed(1);
    const y = (cy + RADIUS * Math.sin(angle)).toFixed(1);
    return (
      `<circle cx="${x}" cy="${y}" r="4" class="figure-point"/>` +
      `<text x="${x}" y="${y}" dx="8" dy="4" class="figure-label">${p.name}</text>`
    );
  });
  const legend = others
    .map((o, i) => `<text x="12" y="${SIZE - 12 - 16 * i}" class="figure-legend">${o.kind} ${o.name}</text>`)
    .join("");

  return (
    `<svg viewBox="0 0 ${SIZE} ${SIZE}" role="img" aria-label="figure for ${problem.id}">` +
    `<rect width="${SIZE}" height="${SIZE}" class="figure-bg"/>` +
    dots.join("") +
    legend +
    `</svg>`
  );
}
