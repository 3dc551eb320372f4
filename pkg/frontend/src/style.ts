// Attribute-to-visual mapping. Must agree with the engine's formula exactly:
// clamp into the domain, then map linearly onto the range; a degenerate
// domain (min == max) maps everything to the range midpoint.

import type { NodeModel, StyleAttribute, StyleDoc } from './types.js';

export function applyStyle(
  value: number,
  domain: [number, number],
  range: [number, number],
): number {
  const [loD, hiD] = domain;
  const [loR, hiR] = range;
  if (loD > hiD) {
    throw new Error(`domain min ${loD} exceeds max ${hiD}`);
  }
  if (loD === hiD) {
    return (loR + hiR) / 2;
  }
  const clamped = Math.min(Math.max(value, loD), hiD);
  return loR + ((clamped - loD) / (hiD - loD)) * (hiR - loR);
}

export function applyStyleColor(
  value: number,
  domain: [number, number],
  range: [string, string],
): string {
  const lo = parseHex(range[0]);
  const hi = parseHex(range[1]);
  const channels = lo.map((c, i) => {
    const mapped = Math.round(applyStyle(value, domain, [c, hi[i]]));
    return Math.min(Math.max(mapped, 0), 255);
  });
  return '#' + channels.map((c) => c.toString(16).padStart(2, '0')).join('');
}

export function attributeValue(node: NodeModel, attribute: StyleAttribute): number {
  const raw = node[attribute];
  return raw === null || raw === undefined ? -Infinity : raw;
}

export function nodeRadius(node: NodeModel, style: StyleDoc): number {
  return applyStyle(
    attributeValue(node, style.node_size_attribute),
    style.node_size_domain,
    style.node_size_range,
  );
}

export function nodeColor(node: NodeModel, style: StyleDoc): string {
  return applyStyleColor(
    attributeValue(node, style.node_color_attribute),
    style.node_color_domain,
    style.node_color_range,
  );
}

function parseHex(color: string): [number, number, number] {
  const match = /^#([0-9a-f]{6})$/i.exec(color);
  if (!match) {
    throw new Error(`${color} is not a #rrggbb color`);
  }
  const raw = match[1];
  return [
    parseInt(raw.slice(0, 2), 16),
    parseInt(raw.slice(2, 4), 16),
    parseInt(raw.slice(4, 6), 16),
  ];
}
