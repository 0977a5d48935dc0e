use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
    /// Both sides; the lower side is the primary value.
    TwoSided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Target {
    #[serde(rename = "w")]
    W,
    #[serde(rename = "we")]
    We,
    #[serde(rename = "w_offdiag")]
    WOffdiag,
}

/// Inputs and parameters an id expects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signature {
    T,
    TWithT,
    TWithR,
    BC,
    BCWithT,
    BCWithR,
    XY,
}

impl Signature {
    pub fn as_str(self) -> &'static str {
        match self {
            Signature::T => "T",
            Signature::TWithT => "T,t",
            Signature::TWithR => "T,r",
            Signature::BC => "B,C",
            Signature::BCWithT => "B,C,t",
            Signature::BCWithR => "B,C,r",
            Signature::XY => "X,Y",
        }
    }

    pub fn uses_t(self) -> bool {
        matches!(self, Signature::TWithT | Signature::BCWithT)
    }

    pub fn uses_r(self) -> bool {
        matches!(self, Signature::TWithR | Signature::BCWithR)
    }

    pub fn is_single(self) -> bool {
        matches!(self, Signature::T | Signature::TWithT | Signature::TWithR)
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
            BoundKind::TwoSided => "twosided",
        })
    }
}

impl Target {
    pub fn as_str(self) -> &'static str {
        match self {
            Target::W => "w",
            Target::We => "we",
            Target::WOffdiag => "w_offdiag",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

macro_rules! registry {
    ($( $variant:ident = $name:literal, $kind:ident, $target:ident, $sig:ident, $anchor:literal; )*) => {
        /// Identifier of a registered inequality.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum BoundId { $( $variant, )* }

        impl BoundId {
            pub const ALL: &'static [BoundId] = &[ $( BoundId::$variant, )* ];

            pub fn name(self) -> &'static str {
                match self { $( BoundId::$variant => $name, )* }
            }

            pub fn kind(self) -> BoundKind {
                match self { $( BoundId::$variant => BoundKind::$kind, )* }
            }

            pub fn target(self) -> Target {
                match self { $( BoundId::$variant => Target::$target, )* }
            }

            pub fn signature(self) -> Signature {
                match self { $( BoundId::$variant => Signature::$sig, )* }
            }

            /// The inequality in plain text.
            pub fn anchor(self) -> &'static str {
                match self { $( BoundId::$variant => $anchor, )* }
            }
        }
    };
}

registry! {
    WeLower21i = "we_lower_21i", Lower, We, BC,
        "w_e(B,C) >= max{w(B), w(C)}";
    WeLower21ii = "we_lower_21ii", Lower, We, BC,
        "w_e(B,C) >= w(B + e^{i theta} C)/sqrt2, best theta on a 64-point grid";
    WeLower21iii = "we_lower_21iii", Lower, We, BC,
        "w_e^2(B,C) >= 1/2 w(B^2 + e^{i theta} C^2) + 1/2 |w^2(B) - w^2(C)|, best theta on a 64-point grid";
    WeLower21iv = "we_lower_21iv", Lower, We, BC,
        "w_e^2(B,C) >= 1/2 w(BC + CB)";
    WeLowerTh22 = "we_lower_th22", Lower, We, BC,
        "w_e^2(B,C) >= 1/4 w(B^2+C^2) + 1/4 (w^2(B)+w^2(C)) + 1/2 |w^2(B)-w^2(C)|";
    WeLowerDragomir = "we_lower_dragomir", Lower, We, BC,
        "w_e^2(B,C) >= 1/2 w(B^2+C^2)";
    WeLowerNormal = "we_lower_normal", Lower, We, BC,
        "B, C normal: w_e^2(B,C) >= 1/4 ||B^2+C^2|| + 1/4 (||B||^2+||C||^2) + 1/2 |||B||^2-||C||^2|";
    WLowerCor25 = "w_lower_cor25", Lower, W, T,
        "w^2(T) >= 1/8 ||T*T+TT*|| + 1/4 (||Re T||^2+||Im T||^2) + 1/2 |||Re T||^2-||Im T||^2|";
    WLowerCor27 = "w_lower_cor27", Lower, W, T,
        "w^2(T) >= 1/8 ||T*T+TT*|| + 1/8 (||Re T+Im T||^2+||Re T-Im T||^2) + 1/4 |||Re T+Im T||^2-||Re T-Im T||^2|";
    WeUpperTh28 = "we_upper_th28", Upper, We, BCWithT,
        "w_e(B,C) <= ||t^2 B*B + (1-t)^2 C*C||^{1/2} + (w^2((1-t)B+tC) + w^2((1-t)B-tC))^{1/2}/sqrt2";
    WeUpperEq5 = "we_upper_eq5", Upper, We, BC,
        "w_e(B,C) <= 1/2 ||B*B+C*C||^{1/2} + (w^2(B+C) + w^2(B-C))^{1/2}/(2 sqrt2)";
    WTwosided29i = "w_twosided_29i", TwoSided, W, T,
        "1/4 ||T*T+TT*|| + 1/2 |||Re T||^2-||Im T||^2| <= w^2(T) <= 1/4 ||T*T+TT*|| + 1/2 (||Re T||^2+||Im T||^2)";
    WTwosided29ii = "w_twosided_29ii", TwoSided, W, T,
        "1/4 ||T*T+TT*|| + 1/4 |||Re T+Im T||^2-||Re T-Im T||^2| <= w^2(T) <= 1/4 ||T*T+TT*|| + 1/4 (||Re T+Im T||^2+||Re T-Im T||^2)";
    WeUpperIntegralR = "we_upper_integral_r", Upper, We, BCWithR,
        "w_e^{2r}(B,C) <= ||int_0^1 (t(B*B+C*C) + (1-t)(BB*+CC*))^r dt||";
    WUpperCor313 = "w_upper_cor313", Upper, W, TWithR,
        "w^2(T) <= ||int_0^1 (t T*T + (1-t) TT*)^r dt||^{1/r}";
    WLowerTh214 = "w_lower_th214", Lower, W, T,
        "w(T) >= 1/4 ||T|| + 1/4 (||Re T||+||Im T||) + 1/2 |||Re T||-||Im T|||";
    WLowerLaa2129 = "w_lower_laa21_29", Lower, W, T,
        "w^2(T) >= 1/4 ||T*T+TT*|| + 1/2 |||Re T||^2-||Im T||^2|";
    WLowerPsk123 = "w_lower_psk1_23", Lower, W, T,
        "w^2(T) >= 1/4 ||T*T+TT*|| + 1/4 |||Re T+Im T||^2-||Re T-Im T||^2|";
    WLowerHks = "w_lower_hks", Lower, W, T,
        "w(T) >= 1/2 ||T|| + 1/4 |||Re T|| - 1/2 ||T||| + 1/4 |||Im T|| - 1/2 ||T|||";
    WLowerLaa2121 = "w_lower_laa21_21", Lower, W, T,
        "w(T) >= 1/2 ||T|| + 1/2 |||Re T||-||Im T|||";
    WSandwichEqv = "w_sandwich_eqv", TwoSided, W, T,
        "1/2 ||T|| <= w(T) <= ||T||";
    WeSandwichEqn1 = "we_sandwich_eqn1", TwoSided, We, BC,
        "1/8 ||B*B+C*C|| <= w_e^2(B,C) <= ||B*B+C*C||";
    OffdiagLower31i = "offdiag_lower_31i", Lower, WOffdiag, XY,
        "w >= max{||X||,||Y||}/4 + 1/4 (a+b) + 1/2 |a-b|, a = ||X+Y*||/2, b = ||X-Y*||/2";
    OffdiagLower31ii = "offdiag_lower_31ii", Lower, WOffdiag, XY,
        "w^2 >= M/8 + 1/4 (a^2+b^2) + 1/2 |a^2-b^2|, M = max{||X*X+YY*||, ||XX*+Y*Y||}";
    OffdiagLower31iii = "offdiag_lower_31iii", Lower, WOffdiag, XY,
        "w^2 >= M/8 + 1/8 (c+d) + 1/4 |c-d|, c = ||(1-i)X+(1+i)Y*||^2/4, d = ||(1+i)X+(1-i)Y*||^2/4";
    OffdiagUpper31iv = "offdiag_upper_31iv", Upper, WOffdiag, XY,
        "w^2 <= M/4 + 1/2 (a^2+b^2)";
    OffdiagUpper31v = "offdiag_upper_31v", Upper, WOffdiag, XY,
        "w^2 <= M/4 + 1/4 (c+d)";
    OffdiagUpperPsk = "offdiag_upper_psk", Upper, WOffdiag, XY,
        "w^4 <= min{beta, gamma}, beta = ||S||^2/16 + 1/4 w^2(YX) + 1/8 w(YXS+SYX), S = X*X+YY*";
    OffdiagLowerPko27 = "offdiag_lower_pko27", Lower, WOffdiag, XY,
        "w >= max{||X||,||Y||}/2 + 1/2 |a-b|";
    OffdiagLowerPko212 = "offdiag_lower_pko212", Lower, WOffdiag, XY,
        "w^2 >= M/4 + 1/2 |a^2-b^2|";
    WUpperAluthgeT = "w_upper_aluthge_t", Upper, W, TWithT,
        "w^2(T) <= ||P_t||^2/16 + 1/4 w^2(T_t) + 1/8 w(T_t P_t + P_t T_t), P_t = |T|^{2(1-t)} + |T|^{2t}, T_t the t-Aluthge transform";
    WUpperAluthgeHalf = "w_upper_aluthge_half", Upper, W, T,
        "w^2(T) <= 1/4 ||T||^2 + 1/4 w^2(T~) + 1/4 w(T~|T| + |T|T~), T~ the Aluthge transform";
    WUpperQt = "w_upper_qt", Upper, W, TWithT,
        "w^2(T) <= ||Q_t||^2/12 + 1/6 w(TQ_t + Q_tT), Q_t = |T*|^{2(1-t)} + |T|^{2t}";
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown bound id `{s}`")))
    }
}

impl Serialize for BoundId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for BoundId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One row of [`list_bounds`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegistryEntry {
    pub id: BoundId,
    pub kind: BoundKind,
    pub target: Target,
    pub signature: &'static str,
    pub anchor: &'static str,
}

/// The full registry in declaration order.
pub fn list_bounds() -> Vec<RegistryEntry> {
    BoundId::ALL
        .iter()
        .map(|&id| RegistryEntry {
            id,
            kind: id.kind(),
            target: id.target(),
            signature: id.signature().as_str(),
            anchor: id.anchor(),
        })
        .collect()
}
