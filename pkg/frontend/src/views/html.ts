// Tiny helpers shared by the render functions. Views return HTML
// strings; the app layer owns mounting and event delegation.

export function esc(value: unknown): string {
  return String(value)
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function option(value: string, selected: string): string {
  const sel = value === selected ? " selected" : "";
  return `<option value="${esc(value)}"${sel}>${esc(value)}</option>`;
}

export function errorList(messages: string[]): string {
  if (messages.length === 0) return "";
  const items = messages.map((m) => `<li>${esc(m)}</li>`).join("");
  return `<ul class="field-errors">${items}</ul>`;
}
