//! Compile-time Zobrist keys (SplitMix64 stream from a fixed seed).

const fn splitmix(state: u64) -> (u64, u64) {
    let state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    (state, z ^ (z >> 31))
}

const PIECE_KEY_COUNT: usize = 2 * 6 * 64;

const fn build_piece_keys() -> [u64; PIECE_KEY_COUNT] {
    let mut keys = [0u64; PIECE_KEY_COUNT];
    let mut state = 0x5eed_1e55_c0de_cafe;
    let mut i = 0;
    while i < PIECE_KEY_COUNT {
        let (next, value) = splitmix(state);
        state = next;
        keys[i] = value;
        i += 1;
    }
    keys
}

const fn build_aux_keys<const N: usize>(mut state: u64) -> [u64; N] {
    let mut keys = [0u64; N];
    let mut i = 0;
    while i < N {
        let (next, value) = splitmix(state);
        state = next;
        keys[i] = value;
        i += 1;
    }
    keys
}

static PIECE_KEYS: [u64; PIECE_KEY_COUNT] = build_piece_keys();
static CASTLING_KEYS: [u64; 16] = build_aux_keys(0x00ca_511e_0000_0001);
static EP_FILE_KEYS: [u64; 8] = build_aux_keys(0x0e9a_55a9_0000_0002);
static SIDE_KEY: [u64; 1] = build_aux_keys(0x51de_0000_0000_0003);

#[inline]
pub fn piece(color: usize, piece: usize, square: usize) -> u64 {
    PIECE_KEYS[(color * 6 + piece) * 64 + square]
}

#[inline]
pub fn castling(rights: u8) -> u64 {
    CASTLING_KEYS[(rights & 0xf) as usize]
}

#[inline]
pub fn en_passant_file(file: u8) -> u64 {
    EP_FILE_KEYS[(file & 7) as usize]
}

#[inline]
pub fn side_to_move() -> u64 {
    SIDE_KEY[0]
}
