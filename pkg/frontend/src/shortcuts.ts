/**
 * Keyboard shortcuts for the checklist.
 *
 * Number row for fluency/alignment/information codes, home row for the
 * simplification codes, `n` for "no error", Enter to submit. The DOM
 * layer ignores shortcuts while focus is in a form field.
 */

export type ShortcutAction =
  | { kind: "toggle-flag"; code: string }
  | { kind: "toggle-no-error" }
  | { kind: "submit" };

export const SHORTCUT_KEYS: Record<string, string> = {
  "1": "A1",
  "2": "A2",
  "3": "A3",
  "4": "A4",
  "5": "A5",
  "6": "B1",
  "7": "B2",
  "8": "C1",
  "9": "C2",
  "0": "C3",
  q: "D1_1",
  w: "D1_2",
  e: "D2_1",
  r: "D2_2",
};

export function actionForKey(key: string): ShortcutAction | null {
  if (key === "Enter") {
    return { kind: "submit" };
  }
  if (key.toLowerCase() === "n") {
    return { kind: "toggle-no-error" };
  }
  const code = SHORTCUT_KEYS[key.toLowerCase()];
  if (code !== undefined) {
    return { kind: "toggle-flag", code };
  }
  return null;
}
