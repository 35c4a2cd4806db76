// Wire types for the scatter/gather session API.

export interface Descriptor {
  term: string;
  weight: number;
}

export interface Sample {
  id: string;
  title: string;
}

export interface ClusterCard {
  id: string;
  size: number;
  descriptors: Descriptor[];
  samples: Sample[];
}

export interface Metrics {
  sc: number | null;
  prt: number;
  ami: number;
  homogeneity: number[];
  k: number;
}

export interface ProjectionPoint {
  id: string;
  x: number;
  y: number;
  cluster: number;
}

export interface SessionState {
  session_id: string;
  generation: number;
  clusters: ClusterCard[];
  metrics: Metrics | null;
  history_depth: number;
  projection?: ProjectionPoint[];
}

export interface DocumentRecord {
  id: string;
  title: string;
  abstract: string | null;
  body: string | null;
  class: string | null;
  cluster: string | null;
}

export interface ApiError {
  error: string;
}
