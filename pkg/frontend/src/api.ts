/** Typed client for the scoring service. The console never computes fuzzy
 * logic locally: every displayed score comes from these calls. */

import type { CandidateRecord, EvaluationResponse, Profile } from './types';

export const DEFAULT_API_BASE =
  (typeof import.meta !== 'undefined' && import.meta.env?.VITE_API_BASE) ||
  'http://127.0.0.1:8000';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: unknown,
  ) {
    super(`service responded ${status}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const text = await response.text();
  const body = text ? JSON.parse(text) : null;
  if (!response.ok) throw new ApiError(response.status, body);
  return body as T;
}

export interface Api {
  evaluate(profile: Profile, signal?: AbortSignal): Promise<EvaluationResponse>;
  listCandidates(): Promise<CandidateRecord[]>;
  createCandidate(name: string, profile: Profile): Promise<CandidateRecord>;
  deleteCandidate(id: string): Promise<void>;
  health(): Promise<{ status: string; rulebase_version: number; candidates: number }>;
}

export function createApi(base: string = DEFAULT_API_BASE): Api {
  const json = { 'content-type': 'application/json' };
  return {
    evaluate: (profile, signal) =>
      request(`${base}/api/evaluate`, {
        method: 'POST',
        headers: json,
        body: JSON.stringify(profile),
        signal,
      }),
    listCandidates: () => request(`${base}/api/candidates`),
    createCandidate: (name, profile) =>
      request(`${base}/api/candidates`, {
        method: 'POST',
        headers: json,
        body: JSON.stringify({ name, profile }),
      }),
    deleteCandidate: async (id) => {
      await request(`${base}/api/candidates/${id}`, { method: 'DELETE' });
    },
    health: () => request(`${base}/api/health`),
  };
}
