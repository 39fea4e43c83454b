import { el } from './dom.js';
import type { TemplateEntry } from './api.js';

const PLACEHOLDER = /^\{\{(\w+)\}\}$/;

// The input box. Template text lands here with required slots kept as
// highlighted {{name}} spans; editing a span past its placeholder marks it
// filled. Plain typing works too (free-form turns are just text).
export class Composer {
  readonly element: HTMLDivElement;
  readonly editor: HTMLDivElement;
  private readonly warning: HTMLDivElement;

  constructor() {
    this.editor = el('div', {
      class: 'composer-editor',
      contenteditable: 'true',
      tabindex: '0',
      'data-testid': 'composer',
    });
    this.warning = el('div', { class: 'slot-warning', 'data-testid': 'slot-warning', hidden: '' });
    this.element = el('div', { class: 'composer' }, [this.warning, this.editor]);

    this.editor.addEventListener('click', (event) => {
      const target = event.target as HTMLElement;
      if (target.classList?.contains('slot')) this.selectSlot(target);
    });
    this.editor.addEventListener('input', () => {
      for (const span of this.slotSpans()) {
        span.classList.toggle('filled', !PLACEHOLDER.test(span.textContent ?? ''));
      }
      this.hideWarning();
    });
  }

  insertTemplate(entry: TemplateEntry): void {
    // Required slots stay as placeholders the designer must overwrite;
    // optional ones are dropped so the inserted text reads as a complete
    // sentence (the server only fills them when it renders its own prompts).
    const required = new Set(entry.slots.filter((s) => s.required).map((s) => s.name));
    const known = new Set(entry.slots.map((s) => s.name));
    this.editor.replaceChildren();
    const pattern = /\{\{(\w+)\}\}/g;
    let last = 0;
    let match: RegExpExecArray | null;
    while ((match = pattern.exec(entry.template))) {
      if (match.index > last) this.editor.append(entry.template.slice(last, match.index));
      const name = match[1];
      if (required.has(name) || !known.has(name)) {
        this.editor.append(
          el('span', { class: 'slot', 'data-slot': name }, [`{{${name}}}`]),
        );
      }
      last = pattern.lastIndex;
    }
    if (last < entry.template.length) this.editor.append(entry.template.slice(last));
    this.hideWarning();
    this.focus();
  }

  slotSpans(): HTMLElement[] {
    return Array.from(this.editor.querySelectorAll<HTMLElement>('span.slot'));
  }

  unfilledSlots(): string[] {
    return this.slotSpans()
      .filter((span) => PLACEHOLDER.test(span.textContent ?? ''))
      .map((span) => span.dataset.slot ?? '');
  }

  fillSlot(name: string, value: string): void {
    for (const span of this.slotSpans()) {
      if (span.dataset.slot === name) {
        span.textContent = value;
        span.classList.add('filled');
        return;
      }
    }
  }

  private selectSlot(span: HTMLElement): void {
    const selection = window.getSelection?.();
    if (!selection) return;
    const range = document.createRange();
    range.selectNodeContents(span);
    selection.removeAllRanges();
    selection.addRange(range);
  }

  text(): string {
    return this.editor.textContent ?? '';
  }

  setText(text: string): void {
    this.editor.replaceChildren();
    this.editor.append(text);
  }

  clear(): void {
    this.editor.replaceChildren();
    this.hideWarning();
  }

  isEmpty(): boolean {
    return this.text().trim() === '';
  }

  focus(): void {
    this.editor.focus();
  }

  setBusy(busy: boolean): void {
    this.editor.setAttribute('contenteditable', busy ? 'false' : 'true');
    this.element.classList.toggle('busy', busy);
  }

  warn(message: string): void {
    this.warning.textContent = message;
    this.warning.hidden = false;
  }

  hideWarning(): void {
    this.warning.hidden = true;
  }
}
