import { el } from './dom.js';
import { BUILD_ORIGIN } from './generated-config.js';

export interface Settings {
  origin: string;
  repairRounds: number;
}

const ORIGIN_KEY = 'menucraft.origin';
const ROUNDS_KEY = 'menucraft.repair_rounds';

// Build-time origin is the default; the settings pane overrides it per
// browser. Repair rounds only affect sessions created from this UI.
export function loadSettings(): Settings {
  const origin = localStorage.getItem(ORIGIN_KEY) ?? BUILD_ORIGIN;
  const rounds = Number(localStorage.getItem(ROUNDS_KEY) ?? '2');
  return { origin, repairRounds: Number.isInteger(rounds) && rounds >= 0 ? rounds : 2 };
}

export function saveSettings(settings: Settings): void {
  localStorage.setItem(ORIGIN_KEY, settings.origin);
  localStorage.setItem(ROUNDS_KEY, String(settings.repairRounds));
}

export class SettingsPane {
  readonly element: HTMLDivElement;
  private readonly originInput: HTMLInputElement;
  private readonly roundsInput: HTMLInputElement;

  constructor(initial: Settings, onSave: (settings: Settings) => void) {
    this.originInput = el('input', { 'data-testid': 'origin-input', value: initial.origin });
    this.roundsInput = el('input', {
      'data-testid': 'rounds-input',
      type: 'number',
      min: '0',
      value: String(initial.repairRounds),
    });
    const save = el('button', { type: 'button', 'data-testid': 'save-settings' }, ['save']);
    save.addEventListener('click', () => {
      const settings: Settings = {
        origin: this.originInput.value.replace(/\/+$/, ''),
        repairRounds: Math.max(0, Math.trunc(Number(this.roundsInput.value) || 0)),
      };
      saveSettings(settings);
      onSave(settings);
      this.element.hidden = true;
    });
    this.element = el('div', { class: 'settings', 'data-testid': 'settings', hidden: '' }, [
      el('label', {}, ['server origin ', this.originInput]),
      el('label', {}, ['repair rounds for new sessions ', this.roundsInput]),
      save,
    ]);
  }

  toggle(): void {
    this.element.hidden = !this.element.hidden;
  }
}
