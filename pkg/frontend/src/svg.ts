/**
 * Minimal SVG document assembly: scales from d3, markup built as strings
 * so no DOM is required.
 */

import type { ScaleContinuousNumeric } from "d3-scale";

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { top: 48, right: 24, bottom: 56, left: 72 };

export interface Frame {
  parts: string[];
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function openFigure(title: string): Frame {
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="15">${esc(title)}</text>`,
  ];
  return { parts };
}

export function closeFigure(frame: Frame): string {
  return frame.parts.join("\n") + "\n</svg>\n";
}

type Scale = ScaleContinuousNumeric<number, number>;

/** Horizontal axis with tick marks, labels, and an axis title. */
export function xAxis(frame: Frame, scale: Scale, label: string, log = false): void {
  const y0 = HEIGHT - MARGIN.bottom;
  frame.parts.push(
    `<line x1="${MARGIN.left}" y1="${y0}" x2="${WIDTH - MARGIN.right}" y2="${y0}" stroke="black"/>`,
  );
  const ticks = log ? scale.ticks(5) : scale.ticks(8);
  for (const tick of ticks) {
    const x = scale(tick);
    frame.parts.push(
      `<line x1="${x}" y1="${y0}" x2="${x}" y2="${y0 + 5}" stroke="black"/>`,
      `<text x="${x}" y="${y0 + 20}" text-anchor="middle" font-size="11">${formatTick(tick)}</text>`,
    );
  }
  frame.parts.push(
    `<text x="${(MARGIN.left + WIDTH - MARGIN.right) / 2}" y="${HEIGHT - 12}" ` +
      `text-anchor="middle" font-size="13">${esc(label)}</text>`,
  );
}

/** Vertical axis with tick marks, labels, and an axis title. */
export function yAxis(frame: Frame, scale: Scale, label: string): void {
  const x0 = MARGIN.left;
  frame.parts.push(
    `<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${HEIGHT - MARGIN.bottom}" stroke="black"/>`,
  );
  for (const tick of scale.ticks(6)) {
    const y = scale(tick);
    frame.parts.push(
      `<line x1="${x0 - 5}" y1="${y}" x2="${x0}" y2="${y}" stroke="black"/>`,
      `<text x="${x0 - 8}" y="${y + 4}" text-anchor="end" font-size="11">${formatTick(tick)}</text>`,
    );
  }
  frame.parts.push(
    `<text transform="rotate(-90)" x="${-(MARGIN.top + HEIGHT - MARGIN.bottom) / 2}" y="20" ` +
      `text-anchor="middle" font-size="13">${esc(label)}</text>`,
  );
}

function formatTick(value: number): string {
  if (value !== 0 && (Math.abs(value) >= 1e4 || Math.abs(value) < 1e-3)) {
    return value.toExponential(0);
  }
  return String(Number(value.toPrecision(6)));
}

export function polyline(frame: Frame, path: string, color: string): void {
  frame.parts.push(`<path d="${path}" fill="none" stroke="${color}" stroke-width="1.5"/>`);
}

export function dot(frame: Frame, x: number, y: number, color: string): void {
  frame.parts.push(`<circle cx="${x}" cy="${y}" r="3.5" fill="${color}"/>`);
}

export function legend(frame: Frame, entries: Array<[string, string]>): void {
  const x0 = WIDTH - MARGIN.right - 110;
  let y = MARGIN.top + 8;
  for (const [name, color] of entries) {
    frame.parts.push(
      `<line x1="${x0}" y1="${y}" x2="${x0 + 22}" y2="${y}" stroke="${color}" stroke-width="2"/>`,
      `<text x="${x0 + 28}" y="${y + 4}" font-size="12">${esc(name)}</text>`,
    );
    y += 18;
  }
}
