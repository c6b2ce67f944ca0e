export const MICROPENCE_PER_PENCE = 1_000_000;

// Render integer micro-pence as pence with trailing zeros trimmed,
// matching the server's formatting: 9000000 -> "9", 17500000 -> "17.5".
export function formatPence(micropence: number): string {
  if (!Number.isSafeInteger(micropence)) {
    throw new Error(`money must be an integer, got ${micropence}`);
  }
  const sign = micropence < 0 ? "-" : "";
  const abs = Math.abs(micropence);
  const whole = Math.floor(abs / MICROPENCE_PER_PENCE);
  const frac = abs % MICROPENCE_PER_PENCE;
  if (frac === 0) return `${sign}${whole}`;
  const digits = frac.toString().padStart(6, "0").replace(/0+$/, "");
  return `${sign}${whole}.${digits}`;
}
