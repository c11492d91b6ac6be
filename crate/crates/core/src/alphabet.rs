//! Finite alphabets made of one or more tracks.
//!
//! A symbol of an arity-`k` alphabet is a `k`-tuple whose `i`-th component
//! ranges over the labels of track `i`. Tuples are flattened into a single
//! dense [`Symbol`] index (mixed radix, track 0 most significant), so that
//! symbol order coincides with the lexicographic order of the tuples.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::AutomataError;

/// Dense index of a symbol inside its [`Alphabet`].
pub type Symbol = u32;

/// Components of a tuple symbol, one entry per track.
pub type Components = SmallVec<[u32; 6]>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    tracks: Vec<Arc<[String]>>,
    size: usize,
}

impl Alphabet {
    /// Single-track alphabet over the given labels.
    pub fn new<I, S>(labels: I) -> Result<Self, AutomataError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let track = make_track(labels)?;
        Ok(Self::from_tracks(vec![track]))
    }

    /// Product alphabet `Σ^arity` over the labels of `base`'s first track.
    pub fn power(base: &Alphabet, arity: usize) -> Self {
        assert!(arity >= 1, "arity must be positive");
        let track = base.tracks[0].clone();
        Self::from_tracks(vec![track; arity])
    }

    /// Alphabet whose tracks are the given label lists.
    pub fn with_tracks<I, T, S>(tracks: I) -> Result<Self, AutomataError>
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tracks = tracks
            .into_iter()
            .map(make_track)
            .collect::<Result<Vec<_>, _>>()?;
        if tracks.is_empty() {
            return Err(AutomataError::EmptyAlphabet);
        }
        Ok(Self::from_tracks(tracks))
    }

    fn from_tracks(tracks: Vec<Arc<[String]>>) -> Self {
        let size = tracks
            .iter()
            .try_fold(1usize, |acc, t| acc.checked_mul(t.len()))
            .filter(|&s| s <= u32::MAX as usize)
            .expect("alphabet too large");
        Self { tracks, size }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self) -> usize {
        self.tracks.len()
    }

    pub fn track(&self, i: usize) -> &[String] {
        &self.tracks[i]
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        0..self.size as Symbol
    }

    /// Splits a symbol into its per-track components.
    pub fn components(&self, symbol: Symbol) -> Components {
        let mut out: Components = SmallVec::from_elem(0, self.tracks.len());
        let mut rest = symbol as usize;
        for (i, track) in self.tracks.iter().enumerate().rev() {
            out[i] = (rest % track.len()) as u32;
            rest /= track.len();
        }
        out
    }

    /// Inverse of [`Alphabet::components`].
    pub fn compose(&self, components: &[u32]) -> Symbol {
        debug_assert_eq!(components.len(), self.tracks.len());
        let mut sym = 0usize;
        for (c, track) in components.iter().zip(&self.tracks) {
            debug_assert!((*c as usize) < track.len());
            sym = sym * track.len() + *c as usize;
        }
        sym as Symbol
    }

    /// Component of `symbol` on a single track.
    pub fn component(&self, symbol: Symbol, track: usize) -> u32 {
        let mut rest = symbol as usize;
        for t in self.tracks[track + 1..].iter() {
            rest /= t.len();
        }
        (rest % self.tracks[track].len()) as u32
    }

    /// Display label, components joined by `/`.
    pub fn label(&self, symbol: Symbol) -> String {
        let comps = self.components(symbol);
        let mut out = String::new();
        for (i, c) in comps.iter().enumerate() {
            if i > 0 {
                out.push('/');
            }
            out.push_str(&self.tracks[i][*c as usize]);
        }
        out
    }

    /// Parses a `t1/t2/...` label back into a symbol.
    pub fn lookup(&self, label: &str) -> Option<Symbol> {
        let parts: Vec<&str> = label.split('/').collect();
        if parts.len() != self.tracks.len() {
            return None;
        }
        let mut comps: Components = SmallVec::new();
        for (part, track) in parts.iter().zip(&self.tracks) {
            comps.push(track.iter().position(|l| l == part)? as u32);
        }
        Some(self.compose(&comps))
    }

    /// Alphabet with track `i` removed.
    pub fn drop_track(&self, i: usize) -> Result<Self, AutomataError> {
        if self.tracks.len() < 2 || i >= self.tracks.len() {
            return Err(AutomataError::BadTrackIndex {
                track: i,
                arity: self.tracks.len(),
            });
        }
        let mut tracks = self.tracks.clone();
        tracks.remove(i);
        Ok(Self::from_tracks(tracks))
    }

    /// Alphabet keeping only the first `n` tracks.
    pub fn prefix_tracks(&self, n: usize) -> Self {
        assert!(n >= 1 && n <= self.tracks.len());
        Self::from_tracks(self.tracks[..n].to_vec())
    }

    /// Track-wise concatenation `self × other`.
    pub fn concat(&self, other: &Alphabet) -> Self {
        let mut tracks = self.tracks.clone();
        tracks.extend(other.tracks.iter().cloned());
        Self::from_tracks(tracks)
    }

    /// True when every track carries the same labels.
    pub fn is_uniform(&self) -> bool {
        self.tracks.windows(2).all(|w| w[0] == w[1])
    }

    /// The single-track alphabet over track `i`'s labels.
    pub fn track_alphabet(&self, i: usize) -> Self {
        Self::from_tracks(vec![self.tracks[i].clone()])
    }
}

fn make_track<I, S>(labels: I) -> Result<Arc<[String]>, AutomataError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
    if labels.is_empty() {
        return Err(AutomataError::EmptyAlphabet);
    }
    for (i, l) in labels.iter().enumerate() {
        if l.is_empty() || l.contains('/') || l.chars().any(char::is_whitespace) {
            return Err(AutomataError::BadLabel(l.clone()));
        }
        if labels[..i].contains(l) {
            return Err(AutomataError::DuplicateLabel(l.clone()));
        }
    }
    Ok(labels.into())
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tracks: Vec<&[String]> = self.tracks.iter().map(|t| &t[..]).collect();
        f.debug_struct("Alphabet").field("tracks", &tracks).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_encoding_is_lexicographic() {
        let base = Alphabet::new(["N", "T"]).unwrap();
        let pairs = Alphabet::power(&base, 2);
        let labels: Vec<String> = pairs.symbols().map(|s| pairs.label(s)).collect();
        assert_eq!(labels, ["N/N", "N/T", "T/N", "T/T"]);
        assert_eq!(pairs.lookup("T/N"), Some(2));
        assert_eq!(pairs.component(2, 0), 1);
        assert_eq!(pairs.component(2, 1), 0);
    }

    #[test]
    fn mixed_tracks_round_trip() {
        let a = Alphabet::with_tracks([vec!["a", "b", "c"], vec!["0", "1"]]).unwrap();
        for s in a.symbols() {
            assert_eq!(a.compose(&a.components(s)), s);
            assert_eq!(a.lookup(&a.label(s)), Some(s));
        }
        assert_eq!(a.drop_track(0).unwrap().size(), 2);
        assert!(a.drop_track(2).is_err());
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["a/b"]).is_err());
    }
}
