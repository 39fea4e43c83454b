import { el } from './dom.js';
import type { TemplateEntry } from './api.js';

// One button per server-side template, plus FreeForm (which has no template
// text; it just clears the input and hands the keyboard to the designer).
export class TemplatePalette {
  readonly element: HTMLDivElement;

  constructor(private readonly onPick: (entry: TemplateEntry | null) => void) {
    this.element = el('div', { class: 'palette', 'data-testid': 'palette' });
  }

  setEntries(entries: TemplateEntry[]): void {
    this.element.replaceChildren();
    for (const entry of entries) {
      this.element.append(this.button(entry.kind, entry));
    }
    this.element.append(this.button('FreeForm', null));
  }

  private button(label: string, entry: TemplateEntry | null): HTMLButtonElement {
    const button = el('button', {
      class: 'palette-entry',
      type: 'button',
      'data-template': label,
    }, [label]);
    if (entry) {
      const slots = entry.slots.map((s) => (s.required ? `{{${s.name}}}` : `[${s.name}]`));
      button.title = slots.length ? `slots: ${slots.join(' ')}` : 'no slots';
    } else {
      button.title = 'start from a blank message';
    }
    button.addEventListener('click', () => this.onPick(entry));
    return button;
  }
}
