use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::color::ColorValue;

/// Dense integer handle of an interned color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorId(pub u32);

impl ColorId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Bijective interning table between color values and dense ids `0..len`.
#[derive(Clone, Debug, Default)]
pub struct Palette {
    values: Vec<ColorValue>,
    index: HashMap<ColorValue, ColorId>,
}

impl Palette {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `v`, assigning the next dense id on first sight.
    pub fn intern(&mut self, v: ColorValue) -> ColorId {
        if let Some(&id) = self.index.get(&v) {
            return id;
        }
        let id = ColorId(self.values.len() as u32);
        self.values.push(v.clone());
        self.index.insert(v, id);
        id
    }

    pub fn id_of(&self, v: &ColorValue) -> Option<ColorId> {
        self.index.get(v).copied()
    }

    pub fn lookup(&self, id: ColorId) -> Option<&ColorValue> {
        self.values.get(id.index())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[ColorValue] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (ColorId, &ColorValue)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (ColorId(i as u32), v))
    }
}

impl PartialEq for Palette {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl Eq for Palette {}
