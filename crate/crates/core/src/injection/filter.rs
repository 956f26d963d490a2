use crate::can::CanFrame;

use super::InjectionError;

/// Rewrites masked payload bytes of frames carrying `match_id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterRule {
    match_id: u16,
    byte_mask: [bool; 8],
    replacement: Vec<u8>,
}

impl FilterRule {
    /// `replacement` holds one value per masked position, in byte order.
    pub fn new(
        match_id: u16,
        byte_mask: [bool; 8],
        replacement: Vec<u8>,
    ) -> Result<Self, InjectionError> {
        let masked = byte_mask.iter().filter(|&&m| m).count();
        if masked != replacement.len() {
            return Err(InjectionError::MaskMismatch {
                masked,
                given: replacement.len(),
            });
        }
        Ok(Self {
            match_id,
            byte_mask,
            replacement,
        })
    }

    /// Replace a single byte, numbered 1..=8.
    pub fn single_byte(
        match_id: u16,
        byte_number: usize,
        value: u8,
    ) -> Result<Self, InjectionError> {
        if !(1..=8).contains(&byte_number) {
            return Err(InjectionError::BadByte(byte_number));
        }
        let mut mask = [false; 8];
        mask[byte_number - 1] = true;
        Self::new(match_id, mask, vec![value])
    }

    pub fn match_id(&self) -> u16 {
        self.match_id
    }

    pub fn byte_mask(&self) -> &[bool; 8] {
        &self.byte_mask
    }

    pub fn set_replacement(&mut self, replacement: Vec<u8>) -> Result<(), InjectionError> {
        *self = Self::new(self.match_id, self.byte_mask, replacement)?;
        Ok(())
    }

    /// Writes the replacement into `data` at masked positions within its
    /// length.
    pub(crate) fn apply(mask: &[bool; 8], replacement: &[u8], data: &mut [u8]) {
        let positions = mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i);
        for (i, &v) in positions.zip(replacement) {
            if let Some(b) = data.get_mut(i) {
                *b = v;
            }
        }
    }
}

/// Tap-point filter: matching frames get their masked bytes replaced, all
/// other frames pass through untouched.
pub fn tap_filter(rule: &FilterRule, frame: &CanFrame) -> CanFrame {
    let mut out = *frame;
    if frame.id() == rule.match_id {
        FilterRule::apply(&rule.byte_mask, &rule.replacement, out.data_mut());
    }
    out
}
