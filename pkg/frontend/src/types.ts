// Shared payload types for the session API.

export interface NodeModel {
  corpus_id: number;
  title: string;
  abstract: string | null;
  authors: string[];
  year: number | null;
  venue: string | null;
  citation_count: number;
  url: string;
  x: number;
  y: number;
  pinned: boolean;
  in_degree: number;
  out_degree: number;
  degree: number;
  pagerank: number;
}

export interface EdgeModel {
  source: number;
  target: number;
}

export type StyleAttribute = 'citation_count' | 'degree' | 'in_degree' | 'pagerank' | 'year';

export interface StyleDoc {
  node_color_attribute: StyleAttribute;
  node_color_domain: [number, number];
  node_color_range: [string, string];
  node_size_attribute: StyleAttribute;
  node_size_domain: [number, number];
  node_size_range: [number, number];
  show_labels: boolean;
  label_max_chars: number;
  show_edge_direction: boolean;
}

export interface CursorDoc {
  corpus_id: number;
  direction: 'references' | 'citations';
  offset: number;
}

export interface GraphModel {
  version: number;
  session_id: string;
  nodes: NodeModel[];
  edges: EdgeModel[];
  style: StyleDoc;
  cursors: CursorDoc[];
}

export interface ExpandResult {
  added_papers: number[];
  added_edges: EdgeModel[];
  cursor: number;
  exhausted: boolean;
}

export interface SnapshotNodeDoc {
  corpus_id: number;
  title: string;
  abstract: string | null;
  authors: string[];
  year: number | null;
  venue: string | null;
  citation_count: number;
  url: string;
  x: number;
  y: number;
  pinned: boolean;
}

export interface SnapshotDoc {
  version: number;
  name: string;
  created_at: string;
  nodes: SnapshotNodeDoc[];
  edges: EdgeModel[];
  style: StyleDoc;
  cursors: CursorDoc[];
}

export type BootMode = 'app' | 'embed';

export interface BootConfig {
  mode: BootMode;
  shareId?: string;
}
