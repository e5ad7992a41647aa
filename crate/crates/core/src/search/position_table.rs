//! Three cyclic buffers of `window` slots each, indexed by position relative
//! to `start`. Occupancy is a 64-bit mask per buffer.

use super::lemma_table::LocalOcc;

pub const MAX_WINDOW: u32 = 64;

#[derive(Debug, Clone, Copy, Default)]
struct Slot {
    pos: u32,
    lemmas: u64,
}

#[derive(Debug, Clone)]
struct Buffer {
    slots: Vec<Slot>,
    mask: u64,
}

#[derive(Debug, Clone)]
pub struct PositionTable {
    start: u32,
    window: u32,
    buffers: [Buffer; 3],
    /// Physical index of logical buffer 0.
    head: usize,
}

impl PositionTable {
    pub fn new(window: u32) -> Self {
        assert!(
            (1..=MAX_WINDOW).contains(&window),
            "window size {window} out of range"
        );
        let buffer = || Buffer {
            slots: vec![Slot::default(); window as usize],
            mask: 0,
        };
        PositionTable {
            start: 0,
            window,
            buffers: [buffer(), buffer(), buffer()],
            head: 0,
        }
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    /// Clears all buffers and sets the origin.
    pub fn shift(&mut self, start: u32) {
        for b in &mut self.buffers {
            b.mask = 0;
        }
        self.head = 0;
        self.start = start;
    }

    /// Records `lem` at `pos`; returns the logical buffer index.
    ///
    /// Panics if `pos` falls outside the three buffers.
    pub fn set(&mut self, pos: u32, lem: u8) -> usize {
        assert!(
            pos >= self.start && pos - self.start < 3 * self.window,
            "position {pos} outside table starting at {}",
            self.start
        );
        let rel = pos - self.start;
        let logical = (rel / self.window) as usize;
        let index = (rel % self.window) as usize;
        let buffer = &mut self.buffers[(self.head + logical) % 3];
        let bit = 1u64 << index;
        let slot = &mut buffer.slots[index];
        if buffer.mask & bit == 0 {
            buffer.mask |= bit;
            *slot = Slot { pos, lemmas: 0 };
        }
        slot.lemmas |= 1u64 << lem;
        logical
    }

    /// Empties logical buffer 0 into `out`, sorted by position then lemma.
    pub fn drain_first(&mut self, out: &mut Vec<LocalOcc>) {
        out.clear();
        let buffer = &mut self.buffers[self.head];
        let mut mask = buffer.mask;
        while mask != 0 {
            let index = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            let slot = buffer.slots[index];
            let mut lemmas = slot.lemmas;
            while lemmas != 0 {
                let lem = lemmas.trailing_zeros() as u8;
                lemmas &= lemmas - 1;
                out.push(LocalOcc { pos: slot.pos, lem });
            }
        }
        buffer.mask = 0;
    }

    /// Rotates the buffers by one and advances the origin by a window.
    /// Logical buffer 0 must already be drained.
    pub fn switch(&mut self) {
        debug_assert_eq!(self.buffers[self.head].mask, 0);
        self.head = (self.head + 1) % 3;
        self.start += self.window;
    }

    pub fn is_empty(&self) -> bool {
        self.buffers.iter().all(|b| b.mask == 0)
    }
}
