// Text rendering for implications and partial examples, matching the
// serialization the service itself uses in reports.

export function implicationText(premise: string[], conclusion: string[]): string {
  const left = premise.join(" ");
  const right = conclusion.join(" ");
  return left ? `${left} -> ${right}` : `-> ${right}`;
}

export function exampleLine(name: string, present: string[], absent: string[]): string {
  const marks = [...present.map((a) => `+${a}`), ...absent.map((a) => `-${a}`)];
  return marks.length ? `${name} : ${marks.join(" ")}` : `${name} :`;
}

/** A plain-language reading of the query, for the card subtitle. */
export function questionText(premise: string[], conclusion: string[]): string {
  const right = conclusion.join(", ");
  if (premise.length === 0) {
    return `Does every object have ${right}?`;
  }
  return `Does every object with ${premise.join(", ")} also have ${right}?`;
}
