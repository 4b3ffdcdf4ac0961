// Display colors for the ten symbols. Must stay in sync with the
// engine's pixmap palette (dataset_io.DEFAULT_PALETTE).
export const PALETTE: readonly string[] = [
  '#000000', // 0 background
  '#0074D9', // 1 blue
  '#FF4136', // 2 red
  '#2ECC40', // 3 green
  '#FFDC00', // 4 yellow
  '#AAAAAA', // 5 grey
  '#F012BE', // 6 fuchsia
  '#FF851B', // 7 orange
  '#7FDBFF', // 8 sky
  '#870C25', // 9 maroon
];

export const NUM_SYMBOLS = 10;
