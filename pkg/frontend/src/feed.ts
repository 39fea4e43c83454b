import { el } from './dom.js';
import type { MessageObj } from './api.js';

// Chat history, rendered straight from the server transcript so repaired
// turns show their corrective designer message and the corrected reply in
// order. The leading system prompt is configuration, not conversation.
export class Feed {
  readonly element: HTMLDivElement;

  constructor() {
    this.element = el('div', { class: 'feed', 'data-testid': 'feed' });
  }

  render(transcript: MessageObj[]): void {
    this.element.replaceChildren();
    for (const message of transcript) {
      if (message.role === 'system') continue;
      const bubble = el('div', { class: `msg ${message.role}`, 'data-role': message.role });
      bubble.textContent = message.text;
      this.element.append(bubble);
    }
    this.element.scrollTop = this.element.scrollHeight;
  }

  messageCount(): number {
    return this.element.children.length;
  }
}
