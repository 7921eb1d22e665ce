import { Outcome, Violation } from './types.js';

// Session state lives entirely in the page: reloading re-fetches the catalog
// and starts an empty conversation. Turns are append-only; one query is in
// flight at a time.

export type TurnOutcome = Outcome & { canonical?: string; violations?: Violation[] };

export interface Turn {
  id: number;
  query: string;
  outcome: TurnOutcome;
  manual: boolean;
  timestamp: number;
}

export interface SessionState {
  turns: Turn[];
  draft: string;
  pending: boolean;
  banner: string | null;
  nextId: number;
}

export type Action =
  | { type: 'draft'; text: string }
  | { type: 'submit' }
  | { type: 'outcome'; query: string; outcome: TurnOutcome; manual?: boolean }
  | { type: 'network-error'; message: string }
  | { type: 'dismiss-banner' };

export function initialState(): SessionState {
  return { turns: [], draft: '', pending: false, banner: null, nextId: 1 };
}

export function reduce(state: SessionState, action: Action): SessionState {
  switch (action.type) {
    case 'draft':
      return { ...state, draft: action.text };
    case 'submit': {
      if (state.pending || !state.draft.trim()) return state;
      return { ...state, pending: true, banner: null };
    }
    case 'outcome': {
      const turn: Turn = {
        id: state.nextId,
        query: action.query,
        outcome: action.outcome,
        manual: Boolean(action.manual),
        timestamp: Date.now(),
      };
      // a clarification keeps the draft so the user can rephrase in place
      const keepDraft = action.outcome.kind !== 'answered';
      return {
        ...state,
        turns: [...state.turns, turn],
        pending: false,
        draft: keepDraft ? state.draft : '',
        nextId: state.nextId + 1,
      };
    }
    case 'network-error':
      return { ...state, pending: false, banner: action.message };
    case 'dismiss-banner':
      return { ...state, banner: null };
  }
}

export function lastAnsweredTurn(state: SessionState): Turn | null {
  for (let i = state.turns.length - 1; i >= 0; i--) {
    if (state.turns[i].outcome.kind === 'answered') return state.turns[i];
  }
  return null;
}
