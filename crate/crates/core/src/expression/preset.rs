use core::fmt;
use core::str::FromStr;

use crate::rig::{MotionId, MotionTargetSet};

use super::ExpressionError;

/// The seven basic emotions with a predefined expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Emotion {
    Happiness,
    Sadness,
    Surprise,
    Fear,
    Anger,
    Disgust,
    Contempt,
}

impl Emotion {
    pub const ALL: [Emotion; 7] = [
        Emotion::Happiness,
        Emotion::Sadness,
        Emotion::Surprise,
        Emotion::Fear,
        Emotion::Anger,
        Emotion::Disgust,
        Emotion::Contempt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Emotion::Happiness => "Happiness",
            Emotion::Sadness => "Sadness",
            Emotion::Surprise => "Surprise",
            Emotion::Fear => "Fear",
            Emotion::Anger => "Anger",
            Emotion::Disgust => "Disgust",
            Emotion::Contempt => "Contempt",
        }
    }

    fn column(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Emotion {
    type Err = ExpressionError;

    /// Case-insensitive emotion name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Emotion::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s.trim()))
            .ok_or(ExpressionError::UnknownEmotion)
    }
}

const NA: f64 = f64::NAN;

// Rows are facial motions 4..=28; columns follow `Emotion::ALL`. NaN marks
// motions the preset leaves untouched. Contempt is the left-only variant.
#[rustfmt::skip]
const PRESET_TABLE: [(u8, [f64; 7]); 25] = [
    (4,  [NA,  NA,  1.0, 1.0, 1.0, NA,  NA ]),
    (5,  [NA,  NA,  NA,  NA,  NA,  NA,  NA ]),
    (6,  [NA,  NA,  NA,  NA,  NA,  NA,  NA ]),
    (7,  [NA,  NA,  NA,  0.7, 0.5, 0.3, NA ]),
    (8,  [NA,  NA,  0.6, 0.6, NA,  NA,  NA ]),
    (9,  [NA,  NA,  0.6, 0.6, NA,  NA,  NA ]),
    (10, [NA,  1.0, NA,  NA,  NA,  NA,  NA ]),
    (11, [NA,  1.0, NA,  NA,  NA,  NA,  NA ]),
    (12, [NA,  1.0, 0.6, 0.6, NA,  NA,  NA ]),
    (13, [NA,  1.0, 0.6, 0.6, NA,  NA,  NA ]),
    (14, [NA,  NA,  NA,  NA,  1.0, 0.6, NA ]),
    (15, [NA,  NA,  NA,  NA,  1.0, 0.6, NA ]),
    (16, [1.0, NA,  NA,  NA,  NA,  NA,  NA ]),
    (17, [1.0, NA,  NA,  NA,  NA,  NA,  NA ]),
    (18, [NA,  NA,  1.0, 1.0, 1.0, 1.0, NA ]),
    (19, [NA,  NA,  1.0, 1.0, 1.0, 1.0, NA ]),
    (20, [NA,  NA,  NA,  1.0, NA,  NA,  1.0]),
    (21, [NA,  NA,  NA,  1.0, NA,  NA,  NA ]),
    (22, [NA,  NA,  NA,  NA,  0.6, NA,  NA ]),
    (23, [1.0, NA,  NA,  NA,  NA,  NA,  1.0]),
    (24, [1.0, NA,  NA,  NA,  NA,  NA,  NA ]),
    (25, [NA,  1.0, NA,  1.0, NA,  NA,  NA ]),
    (26, [NA,  1.0, NA,  1.0, NA,  NA,  NA ]),
    (27, [NA,  NA,  1.0, 0.8, NA,  NA,  NA ]),
    (28, [NA,  1.0, NA,  NA,  1.0, NA,  NA ]),
];

/// Predefined facial targets for `emotion`.
pub fn emotion_preset(emotion: Emotion) -> MotionTargetSet {
    let col = emotion.column();
    PRESET_TABLE
        .iter()
        .filter(|(_, row)| !row[col].is_nan())
        .map(|&(m, row)| (MotionId::new(m).expect("preset motion in range"), row[col]))
        .collect()
}

/// [`emotion_preset`] looked up by name.
pub fn emotion_preset_by_name(name: &str) -> Result<MotionTargetSet, ExpressionError> {
    Ok(emotion_preset(name.parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rig::{ConflictPolicy, RigTable};

    fn motions(p: &[(u8, f64)]) -> MotionTargetSet {
        MotionTargetSet::from_pairs(p).unwrap()
    }

    #[test]
    fn happiness() {
        assert_eq!(
            emotion_preset(Emotion::Happiness),
            motions(&[(16, 1.0), (17, 1.0), (23, 1.0), (24, 1.0)])
        );
    }

    #[test]
    fn surprise() {
        assert_eq!(
            emotion_preset(Emotion::Surprise),
            motions(&[(4, 1.0), (8, 0.6), (9, 0.6), (12, 0.6), (13, 0.6), (18, 1.0), (19, 1.0), (27, 1.0)])
        );
    }

    #[test]
    fn contempt_is_left_only() {
        assert_eq!(emotion_preset(Emotion::Contempt), motions(&[(20, 1.0), (23, 1.0)]));
    }

    #[test]
    fn names() {
        assert_eq!("fear".parse::<Emotion>(), Ok(Emotion::Fear));
        assert_eq!("Joy".parse::<Emotion>(), Err(ExpressionError::UnknownEmotion));
        assert!(emotion_preset_by_name("Anger").is_ok());
    }

    #[test]
    fn presets_are_conflict_free() {
        let rig = RigTable::yui();
        for e in Emotion::ALL {
            let p = emotion_preset(e);
            assert!(rig.detect_conflicts(&p).is_empty(), "{e}");
            rig.motions_to_motor_targets(&p, ConflictPolicy::Strict).unwrap();
        }
    }
}
