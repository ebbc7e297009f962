/** Live scoring loop for the slider panel.
 *
 * Slider changes are debounced (100 ms by default) and at most one
 * evaluate request is in flight; when a newer draft arrives the previous
 * request is aborted and its result discarded (latest wins).
 */

import type { Api } from './api';
import type { EvaluationResponse, Profile } from './types';

export interface ScoreSnapshot {
  status: 'idle' | 'pending' | 'ok' | 'offline';
  response: EvaluationResponse | null;
  /** True while the shown response does not match the current draft. */
  stale: boolean;
}

export interface LiveScorer {
  update(profile: Profile): void;
  snapshot(): ScoreSnapshot;
  subscribe(listener: (snap: ScoreSnapshot) => void): () => void;
  /** Resolves once the latest update has been answered (for tests). */
  settled(): Promise<void>;
  dispose(): void;
}

export function createLiveScorer(api: Api, debounceMs = 100): LiveScorer {
  let snap: ScoreSnapshot = { status: 'idle', response: null, stale: false };
  const listeners = new Set<(s: ScoreSnapshot) => void>();
  let timer: ReturnType<typeof setTimeout> | null = null;
  let controller: AbortController | null = null;
  let generation = 0;
  let waiters: (() => void)[] = [];

  const emit = (next: ScoreSnapshot) => {
    snap = next;
    for (const listener of listeners) listener(snap);
  };

  const settle = () => {
    const pending = waiters;
    waiters = [];
    for (const resolve of pending) resolve();
  };

  const fire = (profile: Profile) => {
    controller?.abort();
    controller = new AbortController();
    const mine = ++generation;
    api
      .evaluate(profile, controller.signal)
      .then((response) => {
        if (mine !== generation) return; // a newer request superseded this one
        emit({ status: 'ok', response, stale: false });
        settle();
      })
      .catch((err: unknown) => {
        if (mine !== generation) return;
        if (err instanceof DOMException && err.name === 'AbortError') return;
        emit({ status: 'offline', response: snap.response, stale: true });
        settle();
      });
  };

  return {
    update(profile: Profile) {
      emit({ ...snap, status: 'pending', stale: true });
      if (timer) clearTimeout(timer);
      timer = setTimeout(() => {
        timer = null;
        fire({ ...profile });
      }, debounceMs);
    },
    snapshot: () => snap,
    subscribe(listener) {
      listeners.add(listener);
      listener(snap);
      return () => listeners.delete(listener);
    },
    settled: () =>
      new Promise((resolve) => {
        if (snap.status === 'ok' || snap.status === 'offline') resolve();
        else waiters.push(resolve);
      }),
    dispose() {
      if (timer) clearTimeout(timer);
      controller?.abort();
      listeners.clear();
    },
  };
}
