// One-question-per-step wizard state. Answers are keyed by question id, so
// back-navigation preserves them; submission is blocked until every
// question has an answer. Answers only ever live in memory.

import type { QuestionnaireDef, Question } from './types.js';

export class WizardState {
  private index = 0;
  private readonly answers = new Map<string, number>();

  constructor(readonly definition: QuestionnaireDef) {
    if (definition.questions.length === 0) throw new Error('questionnaire has no questions');
  }

  get stepIndex(): number {
    return this.index;
  }

  get stepCount(): number {
    return this.definition.questions.length;
  }

  current(): Question {
    return this.definition.questions[this.index];
  }

  answerFor(questionId: string): number | undefined {
    return this.answers.get(questionId);
  }

  select(optionIndex: number): void {
    const question = this.current();
    if (optionIndex < 0 || optionIndex >= question.options.length) {
      throw new Error(`option ${optionIndex} out of range for ${question.id}`);
    }
    this.answers.set(question.id, optionIndex);
  }

  canNext(): boolean {
    return this.answers.has(this.current().id) && this.index < this.stepCount - 1;
  }

  next(): void {
    if (this.canNext()) this.index += 1;
  }

  canBack(): boolean {
    return this.index > 0;
  }

  back(): void {
    if (this.canBack()) this.index -= 1;
  }

  /** Fraction of questions answered, for the progress bar. */
  progress(): number {
    return this.answers.size / this.stepCount;
  }

  unanswered(): string[] {
    return this.definition.questions.filter((q) => !this.answers.has(q.id)).map((q) => q.id);
  }

  canSubmit(): boolean {
    return this.unanswered().length === 0;
  }

  toAnswers(): Record<string, number> {
    if (!this.canSubmit()) throw new Error(`unanswered questions: ${this.unanswered().join(', ')}`);
    return Object.fromEntries(this.answers);
  }
}
