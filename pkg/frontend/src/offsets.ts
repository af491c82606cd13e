// The service reports spans as UTF-8 byte offsets; the DOM works in UTF-16
// string indices. Documents are small, so linear conversion is fine.

const encoder = new TextEncoder();

export function byteLength(text: string): number {
  return encoder.encode(text).length;
}

/** UTF-8 byte offset of a JS string index. */
export function byteOffsetOf(text: string, charIndex: number): number {
  return encoder.encode(text.slice(0, charIndex)).length;
}

/** JS string index for a UTF-8 byte offset (clamped to the text). */
export function charIndexOf(text: string, byteOffset: number): number {
  if (byteOffset <= 0) return 0;
  let bytes = 0;
  let i = 0;
  while (i < text.length) {
    const cp = text.codePointAt(i)!;
    const width = cp > 0xffff ? 2 : 1;
    bytes += encoder.encode(String.fromCodePoint(cp)).length;
    if (bytes > byteOffset) return i;
    i += width;
    if (bytes === byteOffset) return i;
  }
  return text.length;
}
