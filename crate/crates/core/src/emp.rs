//! Excitation and measurement patterns on a loop, their classification,
//! exhaustive enumeration and the closed-form class counts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest loop an [`Emp`] can describe (one bit per node).
pub const MAX_NODES: usize = 64;

/// Bounds for exhaustive enumeration over `3^n` patterns.
pub const ENUMERATE_MIN: usize = 2;
pub const ENUMERATE_MAX: usize = 16;

/// Successor of node `i` on a loop of `n` nodes, 1-based.
pub fn succ(i: usize, n: usize) -> usize {
    i % n + 1
}

/// Predecessor of node `i` on a loop of `n` nodes, 1-based.
pub fn pred(i: usize, n: usize) -> usize {
    (i + n - 2) % n + 1
}

/// Excited set B and measured set C over nodes `1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Emp {
    n: usize,
    excited: u64,
    measured: u64,
}

fn bit(node: usize) -> u64 {
    1u64 << (node - 1)
}

fn nodes_of(mask: u64, n: usize) -> Vec<usize> {
    (1..=n).filter(|&i| mask & bit(i) != 0).collect()
}

impl Emp {
    pub fn new(n: usize, excited: &[usize], measured: &[usize]) -> Result<Self> {
        if n == 0 || n > MAX_NODES {
            return Err(Error::UnsupportedSize {
                n,
                min: 1,
                max: MAX_NODES,
            });
        }
        let mask = |field: &str, nodes: &[usize]| -> Result<u64> {
            nodes.iter().try_fold(0u64, |acc, &i| {
                if (1..=n).contains(&i) {
                    Ok(acc | bit(i))
                } else {
                    Err(Error::format(field, format!("node {i} is outside 1..={n}")))
                }
            })
        };
        Ok(Emp {
            n,
            excited: mask("excited", excited)?,
            measured: mask("measured", measured)?,
        })
    }

    /// Parses one character per node: `E` excited, `M` measured, `B` both.
    /// A `-` marks a node that is neither.
    pub fn from_pattern(pattern: &str) -> Result<Self> {
        let chars: Vec<char> = pattern.trim().chars().collect();
        let n = chars.len();
        if n == 0 || n > MAX_NODES {
            return Err(Error::format(
                "pattern",
                format!("length {n} is outside 1..={MAX_NODES}"),
            ));
        }
        let mut emp = Emp {
            n,
            excited: 0,
            measured: 0,
        };
        for (idx, c) in chars.into_iter().enumerate() {
            let b = bit(idx + 1);
            match c.to_ascii_uppercase() {
                'E' => emp.excited |= b,
                'M' => emp.measured |= b,
                'B' => {
                    emp.excited |= b;
                    emp.measured |= b;
                }
                '-' => {}
                other => {
                    return Err(Error::format(
                        "pattern",
                        format!("unexpected character `{other}` at node {}", idx + 1),
                    ))
                }
            }
        }
        Ok(emp)
    }

    fn from_masks(n: usize, excited: u64, measured: u64) -> Self {
        Emp {
            n,
            excited,
            measured,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_excited(&self, node: usize) -> bool {
        (1..=self.n).contains(&node) && self.excited & bit(node) != 0
    }

    pub fn is_measured(&self, node: usize) -> bool {
        (1..=self.n).contains(&node) && self.measured & bit(node) != 0
    }

    pub fn excited_nodes(&self) -> Vec<usize> {
        nodes_of(self.excited, self.n)
    }

    pub fn measured_nodes(&self) -> Vec<usize> {
        nodes_of(self.measured, self.n)
    }

    pub fn both_nodes(&self) -> Vec<usize> {
        nodes_of(self.excited & self.measured, self.n)
    }

    /// |B| + |C|.
    pub fn cardinality(&self) -> usize {
        (self.excited.count_ones() + self.measured.count_ones()) as usize
    }

    pub fn pattern(&self) -> String {
        (1..=self.n)
            .map(|i| match (self.is_excited(i), self.is_measured(i)) {
                (true, true) => 'B',
                (true, false) => 'E',
                (false, true) => 'M',
                (false, false) => '-',
            })
            .collect()
    }

    /// Measured nodes whose successor is excited, as `(measured, excited)`
    /// pairs in ascending order of the measured node.
    pub fn measured_excited_pairs(&self) -> Vec<(usize, usize)> {
        (1..=self.n)
            .filter(|&i| self.is_measured(i) && self.is_excited(succ(i, self.n)))
            .map(|i| (i, succ(i, self.n)))
            .collect()
    }

    /// Relabels every node `i` as `i + shift` around the loop.
    pub fn rotated(&self, shift: usize) -> Emp {
        let n = self.n;
        let rot = |mask: u64| {
            (1..=n)
                .filter(|&i| mask & bit(i) != 0)
                .fold(0u64, |acc, i| acc | bit((i - 1 + shift) % n + 1))
        };
        Emp::from_masks(n, rot(self.excited), rot(self.measured))
    }

    pub fn with_excited(&self, node: usize) -> Emp {
        Emp::from_masks(self.n, self.excited | bit(node), self.measured)
    }

    pub fn with_measured(&self, node: usize) -> Emp {
        Emp::from_masks(self.n, self.excited, self.measured | bit(node))
    }

    fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }
}

impl fmt::Display for Emp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pattern())
    }
}

/// Which part of the covering condition an EMP breaks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub excited_empty: bool,
    pub measured_empty: bool,
    /// Nodes neither excited nor measured.
    pub uncovered: Vec<usize>,
}

/// B and C nonempty, and every node excited or measured.
pub fn necessary_check(emp: &Emp) -> std::result::Result<(), Violation> {
    let uncovered = nodes_of(emp.full_mask() & !(emp.excited | emp.measured), emp.n);
    let violation = Violation {
        excited_empty: emp.excited == 0,
        measured_empty: emp.measured == 0,
        uncovered,
    };
    if violation.excited_empty || violation.measured_empty || !violation.uncovered.is_empty() {
        Err(violation)
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Invalid,
    ValidMinimal,
    ValidNonMinimal,
}

impl Verdict {
    pub fn is_valid(self) -> bool {
        self != Verdict::Invalid
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Invalid => "invalid",
            Verdict::ValidMinimal => "valid-minimal",
            Verdict::ValidNonMinimal => "valid-non-minimal",
        }
    }
}

/// The rule that decided a classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Reason {
    /// Covering condition broken.
    NecessaryCondition { violation: Violation },
    /// Condition (1): some node is both excited and measured.
    BothNodes { nodes: Vec<usize> },
    /// Condition (2): at least two measured nodes immediately followed by
    /// excited nodes. `pairs` are the witnesses.
    MeasuredExcitedPairs { pairs: Vec<(usize, usize)> },
    /// No both-node and a single measured arc followed by a single excited
    /// arc. Arcs are listed in loop order.
    ContiguousBlocks {
        excited: Vec<usize>,
        measured: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpClass {
    pub verdict: Verdict,
    pub cardinality: usize,
    pub reason: Reason,
    /// Every measured node whose successor is excited.
    pub pairs: Vec<(usize, usize)>,
}

/// Smallest |B| + |C| of any valid EMP on a loop of `n` nodes.
pub fn minimum_valid_cardinality(n: usize) -> usize {
    if n <= 3 {
        n + 1
    } else {
        n
    }
}

/// Walks forward from `start` while `member` holds.
fn arc_from(start: usize, n: usize, member: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut arc = Vec::new();
    let mut i = start;
    while member(i) && arc.len() < n {
        arc.push(i);
        i = succ(i, n);
    }
    arc
}

/// Excited and measured arcs of a contiguous-invalid EMP (covering, no
/// both-node, exactly one measured-to-excited transition), each in loop
/// order. `None` for any other shape.
pub fn contiguous_blocks(emp: &Emp) -> Option<(Vec<usize>, Vec<usize>)> {
    if necessary_check(emp).is_err() || emp.excited & emp.measured != 0 {
        return None;
    }
    let pairs = emp.measured_excited_pairs();
    let [(m_last, e_first)] = pairs[..] else {
        return None;
    };
    let excited = arc_from(e_first, emp.n, |i| emp.is_excited(i));
    let measured_start = succ(*excited.last()?, emp.n);
    let measured = arc_from(measured_start, emp.n, |i| emp.is_measured(i));
    debug_assert_eq!(measured.last(), Some(&m_last));
    Some((excited, measured))
}

/// Identifiability verdict for an EMP on an isolated loop.
pub fn nsc_check(emp: &Emp) -> Result<EmpClass> {
    let n = emp.n;
    if n < 2 {
        return Err(Error::UnsupportedSize {
            n,
            min: 2,
            max: MAX_NODES,
        });
    }
    let cardinality = emp.cardinality();
    let pairs = emp.measured_excited_pairs();
    let class = |verdict, reason| EmpClass {
        verdict,
        cardinality,
        reason,
        pairs: pairs.clone(),
    };
    if let Err(violation) = necessary_check(emp) {
        return Ok(class(
            Verdict::Invalid,
            Reason::NecessaryCondition { violation },
        ));
    }
    let valid = if cardinality == minimum_valid_cardinality(n) {
        Verdict::ValidMinimal
    } else {
        Verdict::ValidNonMinimal
    };
    let both = emp.both_nodes();
    if !both.is_empty() {
        return Ok(class(valid, Reason::BothNodes { nodes: both }));
    }
    if pairs.len() >= 2 {
        let reason = Reason::MeasuredExcitedPairs {
            pairs: pairs.clone(),
        };
        return Ok(class(valid, reason));
    }
    let (excited, measured) =
        contiguous_blocks(emp).expect("covering EMP without both-nodes has one transition");
    Ok(class(
        Verdict::Invalid,
        Reason::ContiguousBlocks { excited, measured },
    ))
}

/// Subset of classes kept by [`enumerate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassFilter {
    Minimal,
    Valid,
    Invalid,
}

impl ClassFilter {
    pub fn accepts(self, verdict: Verdict) -> bool {
        match self {
            ClassFilter::Minimal => verdict == Verdict::ValidMinimal,
            ClassFilter::Valid => verdict.is_valid(),
            ClassFilter::Invalid => verdict == Verdict::Invalid,
        }
    }
}

fn check_enumeration_size(n: usize) -> Result<()> {
    if (ENUMERATE_MIN..=ENUMERATE_MAX).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedSize {
            n,
            min: ENUMERATE_MIN,
            max: ENUMERATE_MAX,
        })
    }
}

/// Every covering EMP on `n` nodes (each node excited, measured or both),
/// in lexicographic order of the pattern string over `B < E < M`.
#[derive(Clone, Debug)]
pub struct CoveringEmps {
    n: usize,
    next: u64,
    end: u64,
}

impl CoveringEmps {
    pub fn new(n: usize) -> Result<Self> {
        check_enumeration_size(n)?;
        Ok(CoveringEmps {
            n,
            next: 0,
            end: 3u64.pow(n as u32),
        })
    }

    /// Patterns whose leading nodes match `prefix`; shards of one `n` with
    /// distinct prefixes of equal length partition the full enumeration.
    pub fn with_prefix(n: usize, prefix: &str) -> Result<Self> {
        check_enumeration_size(n)?;
        if prefix.len() > n {
            return Err(Error::format("prefix", "longer than the loop"));
        }
        let mut start = 0u64;
        for c in prefix.chars() {
            let digit = match c.to_ascii_uppercase() {
                'B' => 0,
                'E' => 1,
                'M' => 2,
                other => {
                    return Err(Error::format(
                        "prefix",
                        format!("unexpected character `{other}`"),
                    ))
                }
            };
            start = start * 3 + digit;
        }
        let span = 3u64.pow((n - prefix.len()) as u32);
        Ok(CoveringEmps {
            n,
            next: start * span,
            end: (start + 1) * span,
        })
    }

    fn decode(&self, mut code: u64) -> Emp {
        let mut excited = 0;
        let mut measured = 0;
        for node in (1..=self.n).rev() {
            let b = bit(node);
            match code % 3 {
                0 => {
                    excited |= b;
                    measured |= b;
                }
                1 => excited |= b,
                _ => measured |= b,
            }
            code /= 3;
        }
        Emp::from_masks(self.n, excited, measured)
    }
}

impl Iterator for CoveringEmps {
    type Item = Emp;

    fn next(&mut self) -> Option<Emp> {
        if self.next >= self.end {
            return None;
        }
        let emp = self.decode(self.next);
        self.next += 1;
        Some(emp)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

/// Classified covering EMPs, optionally restricted to one class.
pub fn enumerate(
    n: usize,
    filter: Option<ClassFilter>,
) -> Result<impl Iterator<Item = (Emp, EmpClass)>> {
    Ok(CoveringEmps::new(n)?.filter_map(move |emp| {
        let class = nsc_check(&emp).expect("enumeration sizes are supported");
        filter
            .is_none_or(|f| f.accepts(class.verdict))
            .then_some((emp, class))
    }))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub minimal: u128,
    pub valid: u128,
    pub invalid: u128,
}

pub fn count_by_enumeration(n: usize) -> Result<Counts> {
    let mut counts = Counts::default();
    for emp in CoveringEmps::new(n)? {
        match nsc_check(&emp)?.verdict {
            Verdict::Invalid => counts.invalid += 1,
            Verdict::ValidMinimal => {
                counts.minimal += 1;
                counts.valid += 1;
            }
            Verdict::ValidNonMinimal => counts.valid += 1,
        }
    }
    Ok(counts)
}

/// Largest `n` for which the closed forms fit in 128 bits.
pub const CLOSED_FORM_MAX: usize = 80;

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Class counts over the `3^n` covering EMPs without enumerating them.
pub fn counts_closed_form(n: usize) -> Result<Counts> {
    if !(2..=CLOSED_FORM_MAX).contains(&n) {
        return Err(Error::UnsupportedSize {
            n,
            min: 2,
            max: CLOSED_FORM_MAX,
        });
    }
    let nn = n as u128;
    let total = 3u128.pow(n as u32);
    // covering EMPs with at least one both-node
    let with_both: u128 = (1..nn)
        .map(|k| 2u128.pow((nn - k) as u32) * binomial(nn, k))
        .sum::<u128>()
        + 1;
    // no both-node and at least two measured-to-excited transitions
    let alternating = if n >= 4 {
        2u128.pow(n as u32) - nn * (nn - 1) - 2
    } else {
        0
    };
    let minimal = match n {
        2 => 4,
        3 => 12,
        _ => alternating,
    };
    let valid = with_both + alternating;
    Ok(Counts {
        minimal,
        valid,
        invalid: total - valid,
    })
}

/// Published counts of minimal, valid and invalid loop EMPs for n = 2..=10.
pub const REFERENCE_COUNTS: [(usize, Counts); 9] = [
    (
        2,
        Counts {
            minimal: 4,
            valid: 5,
            invalid: 2,
        },
    ),
    (
        3,
        Counts {
            minimal: 12,
            valid: 19,
            invalid: 8,
        },
    ),
    (
        4,
        Counts {
            minimal: 2,
            valid: 67,
            invalid: 14,
        },
    ),
    (
        5,
        Counts {
            minimal: 10,
            valid: 221,
            invalid: 22,
        },
    ),
    (
        6,
        Counts {
            minimal: 32,
            valid: 697,
            invalid: 32,
        },
    ),
    (
        7,
        Counts {
            minimal: 84,
            valid: 2143,
            invalid: 44,
        },
    ),
    (
        8,
        Counts {
            minimal: 198,
            valid: 6503,
            invalid: 58,
        },
    ),
    (
        9,
        Counts {
            minimal: 438,
            valid: 19609,
            invalid: 74,
        },
    ),
    (
        10,
        Counts {
            minimal: 932,
            valid: 58957,
            invalid: 92,
        },
    ),
];

pub fn reference_counts(n: usize) -> Option<Counts> {
    REFERENCE_COUNTS
        .iter()
        .find(|(m, _)| *m == n)
        .map(|(_, c)| *c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub column: String,
    /// Which two sources disagree, e.g. `enumerated-vs-reference`.
    pub between: String,
    pub computed: u128,
    pub expected: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub enumerated: Counts,
    pub closed_form: Counts,
    pub reference: Option<Counts>,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub max_n: usize,
    pub rows: Vec<TableRow>,
}

impl TableReport {
    pub fn discrepancy_count(&self) -> usize {
        self.rows.iter().map(|r| r.discrepancies.len()).sum()
    }

    /// Fixed-width text rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::from(
            " n | minimal | valid   | invalid | reference (min/valid/invalid) | notes\n",
        );
        out.push_str("---+---------+---------+---------+-------------------------------+------\n");
        for row in &self.rows {
            let reference = row.reference.map_or_else(
                || "-".to_string(),
                |c| format!("{}/{}/{}", c.minimal, c.valid, c.invalid),
            );
            let notes = row
                .discrepancies
                .iter()
                .map(|d| {
                    format!(
                        "{} {}: {} vs {}",
                        d.column, d.between, d.computed, d.expected
                    )
                })
                .collect::<Vec<_>>()
                .join("; ");
            out.push_str(&format!(
                "{:>2} | {:>7} | {:>7} | {:>7} | {:<29} | {}\n",
                row.n,
                row.enumerated.minimal,
                row.enumerated.valid,
                row.enumerated.invalid,
                reference,
                notes
            ));
        }
        out
    }
}

fn compare(row: &mut Vec<Discrepancy>, between: &str, computed: &Counts, expected: &Counts) {
    for (column, c, e) in [
        ("minimal", computed.minimal, expected.minimal),
        ("valid", computed.valid, expected.valid),
        ("invalid", computed.invalid, expected.invalid),
    ] {
        if c != e {
            row.push(Discrepancy {
                column: column.into(),
                between: between.into(),
                computed: c,
                expected: e,
            });
        }
    }
}

/// Enumerated counts, closed forms and reference values side by side for
/// every `n` in `2..=max_n`.
pub fn table(max_n: usize) -> Result<TableReport> {
    check_enumeration_size(max_n)?;
    let rows = (2..=max_n)
        .map(|n| {
            let enumerated = count_by_enumeration(n)?;
            let closed_form = counts_closed_form(n)?;
            let reference = reference_counts(n);
            let mut discrepancies = Vec::new();
            compare(
                &mut discrepancies,
                "enumerated-vs-closed-form",
                &enumerated,
                &closed_form,
            );
            if let Some(r) = &reference {
                compare(
                    &mut discrepancies,
                    "enumerated-vs-reference",
                    &enumerated,
                    r,
                );
            }
            Ok(TableRow {
                n,
                enumerated,
                closed_form,
                reference,
                discrepancies,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TableReport { max_n, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emp(n: usize, b: &[usize], c: &[usize]) -> Emp {
        Emp::new(n, b, c).unwrap()
    }

    #[test]
    fn necessary_condition_examples() {
        let v = necessary_check(&emp(3, &[1, 2, 3], &[])).unwrap_err();
        assert!(v.measured_empty && !v.excited_empty);
        let v = necessary_check(&emp(4, &[1, 2], &[3])).unwrap_err();
        assert_eq!(v.uncovered, vec![4]);
        assert!(necessary_check(&emp(2, &[1], &[2])).is_ok());
    }

    #[test]
    fn alternating_four_loop_is_minimal() {
        let class = nsc_check(&emp(4, &[2, 4], &[1, 3])).unwrap();
        assert_eq!(class.verdict, Verdict::ValidMinimal);
        assert_eq!(
            class.reason,
            Reason::MeasuredExcitedPairs {
                pairs: vec![(1, 2), (3, 4)]
            }
        );
        assert_eq!(class.cardinality, 4);
    }

    #[test]
    fn contiguous_blocks_are_invalid() {
        let class = nsc_check(&emp(5, &[1, 2, 3], &[4, 5])).unwrap();
        assert_eq!(class.verdict, Verdict::Invalid);
        assert_eq!(
            class.reason,
            Reason::ContiguousBlocks {
                excited: vec![1, 2, 3],
                measured: vec![4, 5]
            }
        );
        // arcs that wrap around node n
        let class = nsc_check(&emp(5, &[5, 1], &[2, 3, 4])).unwrap();
        assert_eq!(
            class.reason,
            Reason::ContiguousBlocks {
                excited: vec![5, 1],
                measured: vec![2, 3, 4]
            }
        );
    }

    #[test]
    fn two_loop_with_one_both_node_is_minimal() {
        let class = nsc_check(&emp(2, &[1, 2], &[1])).unwrap();
        assert_eq!(class.verdict, Verdict::ValidMinimal);
        assert_eq!(class.reason, Reason::BothNodes { nodes: vec![1] });
    }

    #[test]
    fn too_small_loops_are_rejected() {
        assert!(matches!(
            nsc_check(&emp(1, &[1], &[1])),
            Err(Error::UnsupportedSize { n: 1, .. })
        ));
    }

    #[test]
    fn pattern_round_trip() {
        let e = Emp::from_pattern("MEMEB").unwrap();
        assert_eq!(e.excited_nodes(), vec![2, 4, 5]);
        assert_eq!(e.measured_nodes(), vec![1, 3, 5]);
        assert_eq!(e.pattern(), "MEMEB");
        assert!(Emp::from_pattern("MEX").is_err());
        assert!(Emp::new(3, &[4], &[1]).is_err());
    }

    #[test]
    fn rotation_moves_labels() {
        let e = Emp::from_pattern("EEMM-").unwrap();
        assert_eq!(e.rotated(1).pattern(), "-EEMM");
        assert_eq!(e.rotated(5), e);
    }

    #[test]
    fn table_rows_for_small_n() {
        assert_eq!(
            count_by_enumeration(4).unwrap(),
            Counts {
                minimal: 2,
                valid: 67,
                invalid: 14
            }
        );
        let six = count_by_enumeration(6).unwrap();
        assert_eq!((six.minimal, six.valid), (32, 697));
        // 9 assignments: 5 have a both-node, the other 4 (EE, EM, ME, MM) do not
        assert_eq!(
            count_by_enumeration(2).unwrap(),
            Counts {
                minimal: 4,
                valid: 5,
                invalid: 4
            }
        );
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(
            counts_closed_form(10).unwrap(),
            Counts {
                minimal: 932,
                valid: 58957,
                invalid: 92
            }
        );
        let seven = counts_closed_form(7).unwrap();
        assert_eq!((seven.minimal, seven.valid), (84, 2143));
        assert_eq!(counts_closed_form(5).unwrap().minimal, 32 - 20 - 2);
        assert!(counts_closed_form(1).is_err());
    }

    #[test]
    fn enumeration_order_and_filter() {
        let patterns: Vec<String> = CoveringEmps::new(2).unwrap().map(|e| e.pattern()).collect();
        assert_eq!(
            patterns,
            ["BB", "BE", "BM", "EB", "EE", "EM", "MB", "ME", "MM"]
        );
        let minimal: Vec<String> = enumerate(2, Some(ClassFilter::Minimal))
            .unwrap()
            .map(|(e, _)| e.pattern())
            .collect();
        assert_eq!(minimal, ["BE", "BM", "EB", "MB"]);
        assert!(CoveringEmps::new(17).is_err());
        assert!(CoveringEmps::new(1).is_err());
    }

    #[test]
    fn prefix_shards_partition_the_enumeration() {
        let all: Vec<Emp> = CoveringEmps::new(4).unwrap().collect();
        let sharded: Vec<Emp> = ["B", "E", "M"]
            .iter()
            .flat_map(|p| CoveringEmps::with_prefix(4, p).unwrap())
            .collect();
        assert_eq!(all, sharded);
    }

    #[test]
    fn table_flags_only_the_two_node_invalid_cell() {
        let report = table(10).unwrap();
        assert_eq!(report.rows.len(), 9);
        assert_eq!(report.discrepancy_count(), 1);
        let d = &report.rows[0].discrepancies[0];
        assert_eq!(report.rows[0].n, 2);
        assert_eq!(d.column, "invalid");
        assert_eq!((d.computed, d.expected), (4, 2));
    }
}
