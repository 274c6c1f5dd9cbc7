/**
 * Checklist state and the no-error exclusivity rule.
 *
 * The state transitions make an inconsistent vector unrepresentable:
 * ticking "no error" clears every code flag, ticking any code flag
 * clears "no error". Together with the completeness gate on submission
 * this guarantees the client never transmits a vector the server would
 * reject for exclusivity violations (the server enforces the same rule).
 */

export interface ChecklistState {
  readonly noError: boolean;
  readonly flags: ReadonlySet<string>;
}

export function emptyChecklist(): ChecklistState {
  return { noError: false, flags: new Set() };
}

export function toggleNoError(state: ChecklistState): ChecklistState {
  if (state.noError) {
    return { noError: false, flags: new Set() };
  }
  return { noError: true, flags: new Set() };
}

export function toggleFlag(state: ChecklistState, code: string): ChecklistState {
  const flags = new Set(state.flags);
  if (flags.has(code)) {
    flags.delete(code);
    return { noError: false, flags };
  }
  flags.add(code);
  return { noError: false, flags };
}

/** Code checkboxes are disabled while "no error" is ticked. */
export function flagsDisabled(state: ChecklistState): boolean {
  return state.noError;
}

/** Exactly one of "no error" / at least one code: required to submit. */
export function isComplete(state: ChecklistState): boolean {
  return state.noError !== state.flags.size > 0;
}

export function isConsistent(state: ChecklistState): boolean {
  return !(state.noError && state.flags.size > 0);
}

export function toPayload(
  state: ChecklistState,
  allCodes: readonly string[],
): { no_error: boolean; flags: Record<string, boolean> } {
  const flags: Record<string, boolean> = {};
  for (const code of allCodes) {
    flags[code] = state.flags.has(code);
  }
  return { no_error: state.noError, flags };
}
