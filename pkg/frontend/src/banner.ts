import { el } from './dom.js';
import type { ViolationObj } from './api.js';

export interface BannerActions {
  askToFix(violation: ViolationObj): void;
  autoFixHotkeys(): void;
}

// Dismissible banner listing the violations the server reported for the
// latest turn. Fix actions route back through the app: "ask to fix" turns a
// violation's own message into the next designer turn, "auto-fix hotkeys"
// asks the server to reassign shortcuts outright.
export class ViolationBanner {
  readonly element: HTMLDivElement;

  constructor() {
    this.element = el('div', { class: 'banner', 'data-testid': 'violations', hidden: '' });
  }

  show(violations: ViolationObj[], actions: BannerActions): void {
    this.element.replaceChildren();
    this.element.hidden = false;
    const dismiss = el('button', { class: 'banner-dismiss', type: 'button', 'data-testid': 'dismiss-banner' }, ['dismiss']);
    dismiss.addEventListener('click', () => this.clear());
    this.element.append(
      el('div', { class: 'banner-head' }, [
        el('strong', {}, [`${violations.length} constraint violation${violations.length === 1 ? '' : 's'}`]),
        dismiss,
      ]),
    );
    for (const violation of violations) {
      const ask = el('button', { class: 'ask-fix', type: 'button', 'data-testid': 'ask-to-fix' }, ['ask to fix']);
      ask.addEventListener('click', () => actions.askToFix(violation));
      this.element.append(
        el('div', { class: 'violation', 'data-constraint': violation.constraint.type }, [
          el('span', { class: 'violation-msg' }, [violation.message]),
          ask,
        ]),
      );
    }
    if (violations.some((v) => v.constraint.type === 'UniqueHotkeys')) {
      const auto = el('button', { class: 'auto-fix', type: 'button', 'data-testid': 'auto-fix-hotkeys' }, ['auto-fix hotkeys']);
      auto.addEventListener('click', () => actions.autoFixHotkeys());
      this.element.append(auto);
    }
  }

  clear(): void {
    this.element.replaceChildren();
    this.element.hidden = true;
  }

  isVisible(): boolean {
    return !this.element.hidden;
  }

  messages(): string[] {
    return Array.from(this.element.querySelectorAll('.violation-msg')).map(
      (node) => node.textContent ?? '',
    );
  }
}
