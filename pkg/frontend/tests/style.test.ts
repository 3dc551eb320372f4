// Style-mapping parity with the engine: the fixtures carry the engine's own
// outputs for 20 random (value, domain, range) triples.

import { describe, expect, it } from 'vitest';
import { applyStyle, applyStyleColor, nodeRadius } from '../src/style.js';
import parity from './fixtures/style_parity.json';
import type { NodeModel, StyleDoc } from '../src/types.js';

interface Triple {
  value: number;
  domain: [number, number];
  size_range: [number, number];
  color_range: [string, string];
  expected_size: number;
  expected_color: string;
}

const triples = (parity as { triples: Triple[] }).triples;

describe('applyStyle parity with the engine', () => {
  it('ships 20 frozen triples', () => {
    expect(triples).toHaveLength(20);
  });

  it.each(triples.map((t, i) => [i, t] as const))(
    'triple %i: size within 0.5px of the engine',
    (_i, t) => {
      const size = applyStyle(t.value, t.domain, t.size_range);
      expect(Math.abs(size - t.expected_size)).toBeLessThanOrEqual(0.5);
      expect(size).toBeCloseTo(t.expected_size, 9);
    },
  );

  it.each(triples.map((t, i) => [i, t] as const))(
    'triple %i: color matches the engine exactly',
    (_i, t) => {
      expect(applyStyleColor(t.value, t.domain, t.color_range)).toBe(t.expected_color);
    },
  );
});

describe('applyStyle contract', () => {
  it('maps domain endpoints to range endpoints', () => {
    expect(applyStyle(0, [0, 1000], [3, 15])).toBe(3);
    expect(applyStyle(1000, [0, 1000], [3, 15])).toBe(15);
  });

  it('clamps outside the domain', () => {
    expect(applyStyle(-10, [0, 1000], [3, 15])).toBe(3);
    expect(applyStyle(99999, [0, 1000], [3, 15])).toBe(15);
  });

  it('degenerate domain maps to the range midpoint', () => {
    expect(applyStyle(7, [4, 4], [3, 15])).toBe(9);
  });

  it('rejects an inverted domain', () => {
    expect(() => applyStyle(1, [5, 4], [3, 15])).toThrow();
  });

  it('nodeRadius uses the configured attribute', () => {
    const style = {
      node_size_attribute: 'pagerank',
      node_size_domain: [0, 1],
      node_size_range: [2, 22],
    } as unknown as StyleDoc;
    const node = { pagerank: 0.5 } as unknown as NodeModel;
    expect(nodeRadius(node, style)).toBe(12);
  });
});
