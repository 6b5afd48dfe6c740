// Client-side validation mirroring the server's rules, so obvious mistakes
// surface inline before a request is made. The server remains authoritative.

import type { Contact } from './types.js';

export const MAX_CONTACTS = 10;
export const MAX_TEXT_BYTES = 32 * 1024;

// Same pragmatic addr-spec shape the server enforces.
const EMAIL_RE = /^[A-Za-z0-9._%+-]+@[A-Za-z0-9]([A-Za-z0-9-]*[A-Za-z0-9])?(\.[A-Za-z0-9]([A-Za-z0-9-]*[A-Za-z0-9])?)+$/;

export function isValidEmail(address: string): boolean {
  return EMAIL_RE.test(address);
}

export function textByteLength(text: string): number {
  return new TextEncoder().encode(text).length;
}

export function textTooLarge(text: string): boolean {
  return textByteLength(text) > MAX_TEXT_BYTES;
}

export interface ContactIssue {
  index: number; // -1 for list-level issues
  message: string;
}

export function validateContactList(contacts: Contact[]): ContactIssue[] {
  const issues: ContactIssue[] = [];
  if (contacts.length > MAX_CONTACTS) {
    issues.push({ index: -1, message: `at most ${MAX_CONTACTS} contacts` });
  }
  const seenPriorities = new Set<number>();
  contacts.forEach((contact, index) => {
    if (!contact.name.trim()) issues.push({ index, message: 'name is required' });
    if (!isValidEmail(contact.email)) issues.push({ index, message: 'invalid email address' });
    if (!Number.isInteger(contact.priority) || contact.priority < 1) {
      issues.push({ index, message: 'priority must be a positive integer' });
    } else if (seenPriorities.has(contact.priority)) {
      issues.push({ index, message: `duplicate priority ${contact.priority}` });
    } else {
      seenPriorities.add(contact.priority);
    }
  });
  return issues;
}

export function canAddContact(contacts: Contact[]): boolean {
  return contacts.length < MAX_CONTACTS;
}
