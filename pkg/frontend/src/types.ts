// API wire types, mirroring the canonical JSON served under /api/v1.
// Field names are snake_case because the server's JSON is the contract.

export interface HardwareTier {
  name: string;
  processors: number;
  cores_per_processor: number;
  frequency_ghz: number;
  ram_gb: number;
}

export type WorkloadType = "steady" | "burst";
export type Architecture = "single" | "distributed";
export type SizingLevel = "deployment" | "runtime";

export interface RuntimeProfile {
  workload_type: WorkloadType;
  concurrency: number;
  throughput: number;
  payload_request_kb: number;
  payload_response_kb: number;
}

export interface ServiceSpec {
  id: string;
  implementation_type: string;
  binding_type: string;
  profile: RuntimeProfile | null;
}

export interface SizingRequestBody {
  services: ServiceSpec[];
  architecture: Architecture;
  level: SizingLevel;
  default_profile?: RuntimeProfile | null;
}

export interface TopologyNode {
  id: string;
  service_ids: string[];
}

export interface TopologyHost {
  id: string;
  nodes: TopologyNode[];
}

export interface MachinePlan {
  index: number;
  tier: string;
  hosts: TopologyHost[];
  total_cpu_pct: number;
  total_memory_mb: number;
}

export interface Topology {
  tier: string;
  machines: MachinePlan[];
}

export interface PerformanceCurve {
  tier: string;
  points: [number, number][];
  degradation_threshold: number;
}

export interface TierError {
  code: string;
  message: string;
  service_id: string | null;
}

export interface Recommendation {
  kind: string;
  tier: string | null;
  message: string;
  details: Record<string, unknown>;
}

export interface EchoedRequest {
  services: ServiceSpec[];
  architecture: Architecture;
  level: SizingLevel;
  tiers: HardwareTier[];
  packer: {
    cpu_cap_pct: number;
    mem_cap_fraction: number;
    max_nodes_per_host: number;
    services_per_node_cap: number;
    node_overhead_mb: number;
  };
  coefficients: unknown;
  default_profile: RuntimeProfile | null;
}

export interface SizingResult {
  run_id: string;
  created_at: string | null;
  request_echo: EchoedRequest;
  per_tier: Record<string, Topology>;
  per_tier_errors: Record<string, TierError>;
  curves: Record<string, PerformanceCurve>;
  traces: Record<string, { events: Record<string, unknown>[] }>;
  recommendations: Recommendation[];
  warnings: Recommendation[];
}

export interface ApiError {
  code: string;
  message: string;
  path?: string;
}
