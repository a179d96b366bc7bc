/** The 16 channels with their wire names, board labels and strip grouping. */

export interface ChannelDef {
  code: number;
  name: string;    // wire name, matches the service's channel enum
  label: string;   // short strip label
  group: string;   // board section
}

export const CHANNELS: ChannelDef[] = [
  { code: 0, name: "INDEX_BASE", label: "IDX base", group: "index" },
  { code: 1, name: "INDEX_TIP", label: "IDX tip", group: "index" },
  { code: 2, name: "MIDDLE_BASE", label: "MID base", group: "middle" },
  { code: 3, name: "MIDDLE_TIP", label: "MID tip", group: "middle" },
  { code: 4, name: "RING_BASE", label: "RNG base", group: "ring" },
  { code: 5, name: "RING_TIP", label: "RNG tip", group: "ring" },
  { code: 6, name: "LITTLE_BASE", label: "LTL base", group: "little" },
  { code: 7, name: "LITTLE_TIP", label: "LTL tip", group: "little" },
  { code: 8, name: "THUMB_PROXIMAL", label: "THB prox", group: "thumb" },
  { code: 9, name: "THUMB_MIDDLE", label: "THB mid", group: "thumb" },
  { code: 10, name: "THUMB_DISTAL", label: "THB dist", group: "thumb" },
  { code: 11, name: "THUMB_TIP", label: "THB tip", group: "thumb" },
  { code: 12, name: "PALM_BELLOW", label: "PALM", group: "palm" },
  { code: 13, name: "ABDUCTION_INDEX_MIDDLE", label: "SPR i-m", group: "spread" },
  { code: 14, name: "ABDUCTION_MIDDLE_RING", label: "SPR m-r", group: "spread" },
  { code: 15, name: "ABDUCTION_RING_LITTLE", label: "SPR r-l", group: "spread" },
];

/** Board order: four finger pairs, thumb block, palm, the three spreads. */
export const GROUP_ORDER = [
  "index", "middle", "ring", "little", "thumb", "palm", "spread",
] as const;

export const N_CHANNELS = 16;

export function channelByName(name: string): ChannelDef {
  const def = CHANNELS.find((c) => c.name === name);
  if (!def) throw new Error(`unknown channel ${name}`);
  return def;
}
