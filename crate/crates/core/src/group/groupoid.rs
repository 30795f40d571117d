//! The groupoid of the adjoint action of a group on itself.
//!
//! Objects are group elements; every pair `(u, v)` is an arrow from
//! `v⁻¹u` to `uv⁻¹`. Source and target of an arrow are conjugate
//! (`uv⁻¹ = v·(v⁻¹u)·v⁻¹`), so the connected components are exactly the
//! conjugacy classes.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Group, GroupElement};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Arrow {
    pub u: GroupElement,
    pub v: GroupElement,
}

impl Arrow {
    pub fn new(u: GroupElement, v: GroupElement) -> Self {
        Arrow { u, v }
    }

    /// The identity arrow at an object `g` is `(g, e)`.
    pub fn identity_at(g: GroupElement) -> Self {
        let e = g.identity_like();
        Arrow { u: g, v: e }
    }

    /// `v⁻¹u`.
    pub fn source(&self) -> GroupElement {
        &self.v.inv() * &self.u
    }

    /// `uv⁻¹`.
    pub fn target(&self) -> GroupElement {
        &self.u * &self.v.inv()
    }

    /// `self ∘ rhs = (v₂u₁, v₂v₁)` for `self = (u₂, v₂)`, `rhs = (u₁, v₁)`.
    /// Requires `source(self) = target(rhs)`.
    pub fn compose(&self, rhs: &Arrow) -> Result<Arrow> {
        let s = self.source();
        let t = rhs.target();
        if s != t {
            return Err(Error::NotComposable {
                source_of_left: s.to_string(),
                target_of_right: t.to_string(),
            });
        }
        Ok(Arrow {
            u: self.v.try_mul(&rhs.u)?,
            v: self.v.try_mul(&rhs.v)?,
        })
    }

    /// Parses `{"u": <element>, "v": <element>}`.
    pub fn from_json(value: &serde_json::Value, group: &Group) -> Result<Arrow> {
        #[derive(Deserialize)]
        struct Raw {
            u: serde_json::Value,
            v: serde_json::Value,
        }
        let raw: Raw = serde_json::from_value(value.clone())
            .map_err(|e| Error::Spec(format!("arrow: {e}")))?;
        Ok(Arrow {
            u: group.parse_element(&raw.u)?,
            v: group.parse_element(&raw.v)?,
        })
    }
}

impl fmt::Debug for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.u, self.v)
    }
}
