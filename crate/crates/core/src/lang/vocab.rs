use std::borrow::Cow;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::LangError;

/// How objects are named.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectNaming {
    /// `a1, a2, a3, ...` without bound.
    Indexed,
    /// A finite list of everyday nouns (`car`, `house`, ...).
    Named(Vec<String>),
}

/// Object names, unary predicates and the groups of mutually exclusive
/// predicates (colour terms, say). Predicates in one group exclude each
/// other, so `red(x)` fixes `blue(x)` to false.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawVocabulary", into = "RawVocabulary")]
pub struct Vocabulary {
    objects: ObjectNaming,
    predicates: Vec<String>,
    exclusivity_groups: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct RawVocabulary {
    objects: ObjectNaming,
    predicates: Vec<String>,
    #[serde(default)]
    exclusivity_groups: Vec<Vec<String>>,
}

impl TryFrom<RawVocabulary> for Vocabulary {
    type Error = LangError;

    fn try_from(raw: RawVocabulary) -> Result<Self, Self::Error> {
        Vocabulary::new(raw.objects, raw.predicates, raw.exclusivity_groups)
    }
}

impl From<Vocabulary> for RawVocabulary {
    fn from(v: Vocabulary) -> Self {
        RawVocabulary {
            objects: v.objects,
            predicates: v.predicates,
            exclusivity_groups: v.exclusivity_groups,
        }
    }
}

const COLOURS: &[&str] = &[
    "blue", "red", "green", "purple", "yellow", "brown", "violet", "black", "white", "pink",
    "orange", "grey",
];

const NOUNS: &[&str] = &[
    "car", "house", "shirt", "table", "cup", "plate", "hat", "book", "chair", "lamp", "door",
    "ball", "bag", "box", "pen", "bike",
];

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

impl Vocabulary {
    pub fn new(
        objects: ObjectNaming,
        predicates: Vec<String>,
        exclusivity_groups: Vec<Vec<String>>,
    ) -> Result<Self, LangError> {
        let invalid = |msg: String| Err(LangError::InvalidVocabulary(msg));
        if predicates.is_empty() {
            return invalid("at least one predicate is required".into());
        }
        let mut seen = BTreeSet::new();
        for p in &predicates {
            if !is_identifier(p) {
                return invalid(format!("predicate `{p}` is not an identifier"));
            }
            if p == "is" || p == "not" {
                return invalid(format!("predicate name `{p}` is reserved"));
            }
            if !seen.insert(p.as_str()) {
                return invalid(format!("duplicate predicate `{p}`"));
            }
        }
        if let ObjectNaming::Named(names) = &objects {
            let mut seen_obj = BTreeSet::new();
            for n in names {
                if !is_identifier(n) {
                    return invalid(format!("object `{n}` is not an identifier"));
                }
                if seen.contains(n.as_str()) || !seen_obj.insert(n.as_str()) {
                    return invalid(format!("duplicate name `{n}`"));
                }
            }
        }
        let mut grouped = BTreeSet::new();
        for g in &exclusivity_groups {
            if g.len() < 2 {
                return invalid(format!("exclusivity group {g:?} has fewer than 2 members"));
            }
            for p in g {
                if !seen.contains(p.as_str()) {
                    return invalid(format!("exclusivity group mentions unknown predicate `{p}`"));
                }
                if !grouped.insert(p.as_str()) {
                    return invalid(format!("predicate `{p}` belongs to more than one group"));
                }
            }
        }
        Ok(Vocabulary {
            objects,
            predicates,
            exclusivity_groups,
        })
    }

    /// Objects `a1, a2, ...` and the single predicate `blue`.
    pub fn logical() -> Self {
        Self::new(ObjectNaming::Indexed, vec!["blue".into()], vec![]).expect("valid preset")
    }

    /// Objects `a1, a2, ...` with predicates `blue` and an independent `A`.
    pub fn logical_plus() -> Self {
        Self::new(ObjectNaming::Indexed, vec!["blue".into(), "A".into()], vec![])
            .expect("valid preset")
    }

    /// Everyday nouns, mutually exclusive colour terms, and an independent
    /// `large` used for underspecified mentions.
    pub fn everyday() -> Self {
        let mut predicates: Vec<String> = COLOURS.iter().map(|s| s.to_string()).collect();
        predicates.push("large".into());
        Self::new(
            ObjectNaming::Named(NOUNS.iter().map(|s| s.to_string()).collect()),
            predicates,
            vec![COLOURS.iter().map(|s| s.to_string()).collect()],
        )
        .expect("valid preset")
    }

    /// Looks up a named preset: `logical`, `logical_plus` or `everyday`.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "logical" | "L" => Some(Self::logical()),
            "logical_plus" | "logical-plus" | "L+" => Some(Self::logical_plus()),
            "everyday" => Some(Self::everyday()),
            _ => None,
        }
    }

    pub fn naming(&self) -> &ObjectNaming {
        &self.objects
    }

    pub fn predicates(&self) -> &[String] {
        &self.predicates
    }

    pub fn exclusivity_groups(&self) -> &[Vec<String>] {
        &self.exclusivity_groups
    }

    pub fn has_predicate(&self, name: &str) -> bool {
        self.predicates.iter().any(|p| p == name)
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.object_index(name).is_some()
    }

    /// Canonical position of an object name.
    pub fn object_index(&self, name: &str) -> Option<usize> {
        match &self.objects {
            ObjectNaming::Named(names) => names.iter().position(|n| n == name),
            ObjectNaming::Indexed => {
                let digits = name.strip_prefix('a')?;
                if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return None;
                }
                digits.parse::<usize>().ok().map(|i| i - 1)
            }
        }
    }

    /// Name of the object at canonical position `i`, if there is one.
    pub fn object(&self, i: usize) -> Option<Cow<'_, str>> {
        match &self.objects {
            ObjectNaming::Named(names) => names.get(i).map(|s| Cow::Borrowed(s.as_str())),
            ObjectNaming::Indexed => Some(Cow::Owned(format!("a{}", i + 1))),
        }
    }

    /// Number of nameable objects, `None` when unbounded.
    pub fn object_capacity(&self) -> Option<usize> {
        match &self.objects {
            ObjectNaming::Named(names) => Some(names.len()),
            ObjectNaming::Indexed => None,
        }
    }

    pub fn group_of(&self, predicate: &str) -> Option<&[String]> {
        self.exclusivity_groups
            .iter()
            .find(|g| g.iter().any(|p| p == predicate))
            .map(|g| g.as_slice())
    }

    /// True when `p` and `q` are distinct members of one exclusivity group.
    pub fn excludes(&self, p: &str, q: &str) -> bool {
        p != q && self.group_of(p).is_some_and(|g| g.iter().any(|x| x == q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        assert_eq!(Vocabulary::logical().predicates(), ["blue"]);
        assert_eq!(Vocabulary::logical_plus().predicates(), ["blue", "A"]);
        let e = Vocabulary::everyday();
        assert!(e.excludes("blue", "red"));
        assert!(!e.excludes("blue", "blue"));
        assert!(!e.excludes("blue", "large"));
        assert!(e.object_capacity().unwrap() >= 10);
    }

    #[test]
    fn indexed_objects() {
        let v = Vocabulary::logical();
        assert_eq!(v.object_index("a1"), Some(0));
        assert_eq!(v.object_index("a12"), Some(11));
        assert_eq!(v.object_index("a0"), None);
        assert_eq!(v.object_index("a01"), None);
        assert_eq!(v.object_index("b1"), None);
        assert_eq!(v.object(2).unwrap(), "a3");
    }

    #[test]
    fn rejects_bad_groups() {
        let err = Vocabulary::new(
            ObjectNaming::Indexed,
            vec!["blue".into(), "red".into()],
            vec![vec!["blue".into()]],
        );
        assert!(matches!(err, Err(LangError::InvalidVocabulary(_))));
        let err = Vocabulary::new(
            ObjectNaming::Indexed,
            vec!["blue".into(), "red".into(), "green".into()],
            vec![vec!["blue".into(), "red".into()], vec!["blue".into(), "green".into()]],
        );
        assert!(matches!(err, Err(LangError::InvalidVocabulary(_))));
        let err = Vocabulary::new(ObjectNaming::Indexed, vec!["blue".into(), "blue".into()], vec![]);
        assert!(err.is_err());
    }

    #[test]
    fn serde_validates() {
        let ok: Vocabulary =
            toml::from_str("objects = \"indexed\"\npredicates = [\"blue\"]\n").unwrap();
        assert_eq!(ok, Vocabulary::logical());
        let bad: Result<Vocabulary, _> = toml::from_str(
            "objects = \"indexed\"\npredicates = [\"blue\"]\nexclusivity_groups = [[\"blue\"]]\n",
        );
        assert!(bad.is_err());
    }
}
