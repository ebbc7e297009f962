/** Console state: the draft profile under the sliders, the fetched roster,
 * and the comparison selection. All transitions are pure functions. */

import {
  ATTRIBUTES,
  HEIGHT_ATTRIBUTE,
  HEIGHT_RANGE,
  RATING_RANGE,
} from './types';
import type { Attribute, CandidateRecord, EvaluationResponse, Profile } from './types';

export const MAX_COMPARED = 4;
export const MIN_COMPARED = 2;

export interface ConsoleState {
  draft: Profile;
  roster: CandidateRecord[];
  selected: string[];
  lastEvaluation: EvaluationResponse | null;
  offline: boolean;
  stale: boolean;
}

export function clampValue(attribute: Attribute, value: number): number {
  const range = attribute === HEIGHT_ATTRIBUTE ? HEIGHT_RANGE : RATING_RANGE;
  if (Number.isNaN(value)) return range.min;
  return Math.min(range.max, Math.max(range.min, value));
}

export function defaultDraft(): Profile {
  const draft = {} as Profile;
  for (const attribute of ATTRIBUTES) {
    draft[attribute] = attribute === HEIGHT_ATTRIBUTE ? 180 : 5;
  }
  return draft;
}

export function initialState(): ConsoleState {
  return {
    draft: defaultDraft(),
    roster: [],
    selected: [],
    lastEvaluation: null,
    offline: false,
    stale: false,
  };
}

export function setDraftValue(state: ConsoleState, attribute: Attribute, value: number): ConsoleState {
  const draft = { ...state.draft, [attribute]: clampValue(attribute, value) };
  return { ...state, draft, stale: true };
}

export function setRoster(state: ConsoleState, roster: CandidateRecord[]): ConsoleState {
  const ids = new Set(roster.map((r) => r.id));
  return {
    ...state,
    roster,
    // selection stays a subset of the roster
    selected: state.selected.filter((id) => ids.has(id)),
  };
}

/** Toggle a candidate in the comparison selection, capped at MAX_COMPARED. */
export function toggleSelected(state: ConsoleState, id: string): ConsoleState {
  if (!state.roster.some((r) => r.id === id)) return state;
  if (state.selected.includes(id)) {
    return { ...state, selected: state.selected.filter((s) => s !== id) };
  }
  if (state.selected.length >= MAX_COMPARED) return state;
  return { ...state, selected: [...state.selected, id] };
}

export function applyEvaluation(state: ConsoleState, response: EvaluationResponse): ConsoleState {
  return { ...state, lastEvaluation: response, offline: false, stale: false };
}

export function markOffline(state: ConsoleState): ConsoleState {
  return { ...state, offline: true };
}
