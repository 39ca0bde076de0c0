//! Reference values transcribed from the published tables and worked
//! examples, in this workspace's textual notations.

/// `(i, n, species, surviving topological types)`; species in exponent
/// notation, types as printed by the type filter.
pub const SPECIES_TABLE: &[(u32, u32, &str, &[&str])] = &[
    (1, 5, "<3^3.4^2>", &["[3^3.4^2]", "[3^2.4.3.4]"]),
    (1, 5, "<3^4.6>", &["[3^4.6]"]),
    (1, 6, "<3^6>", &["[3^6]"]),
    (2, 10, "<3^8.4.12>", &[]),
    (2, 10, "<3^8.6^2>", &["[3^6]", "[3^4.6]", "[3.6.3.6]"]),
    (2, 10, "<3^7.4^2.6>", &["[3^4.6]"]),
    (2, 10, "<3^6.4^4>", &["[3^6]", "[3^3.4^2]", "[3^2.4.3.4]", "[4^4]"]),
    (2, 11, "<3^10.6>", &["[3^4.6]"]),
    (2, 11, "<3^9.4^2>", &["[3^6]", "[3^3.4^2]", "[3^2.4.3.4]"]),
    (2, 12, "<3^12>", &["[3^6]"]),
    (3, 15, "<3^13.7.42>", &[]),
    (3, 15, "<3^13.8.24>", &[]),
    (3, 15, "<3^13.9.18>", &[]),
    (3, 15, "<3^13.10.15>", &[]),
    (3, 15, "<3^12.4.5.20>", &[]),
    (3, 15, "<3^12.5^2.10>", &[]),
    (3, 15, "<3^11.4^3.12>", &[]),
    (3, 15, "<3^13.12^2>", &["[3^4.6]", "[3.12^2]"]),
    (3, 15, "<3^12.4.6.12>", &["[4.6.12]"]),
    (3, 15, "<3^12.4.8^2>", &["[3^3.4^2]", "[3^2.4.3.4]", "[4.8^2]"]),
    (3, 15, "<3^12.6^3>", &["[3^6]", "[3^3.4^2]", "[3^2.4.3.4]", "[3^4.6]", "[3.6.3.6]", "[6^3]"]),
    (
        3,
        15,
        "<3^11.4^2.6^2>",
        &["[3^6]", "[3^3.4^2]", "[3^2.4.3.4]", "[4^4]", "[3^4.6]", "[3.6.3.6]", "[3.4.6.4]"],
    ),
    (3, 15, "<3^10.4^4.6>", &["[3^6]", "[3^3.4^2]", "[3^2.4.3.4]", "[4^4]", "[3^4.6]"]),
    (3, 15, "<3^9.4^6>", &["[3^6]", "[3^3.4^2]", "[3^2.4.3.4]", "[4^4]"]),
    (3, 16, "<3^14.4.12>", &[]),
    (3, 16, "<3^14.6^2>", &["[3^6]", "[3^3.4^2]", "[3^2.4.3.4]", "[3^4.6]", "[3.6.3.6]"]),
    (3, 16, "<3^13.4^2.6>", &["[3^6]", "[3^3.4^2]", "[3^2.4.3.4]", "[3^4.6]", "[3.4.6.4]"]),
    (3, 16, "<3^12.4^4>", &["[3^6]", "[3^3.4^2]", "[3^2.4.3.4]", "[4^4]"]),
    (3, 17, "<3^16.6>", &["[3^6]", "[3^4.6]"]),
    (3, 17, "<3^15.4^2>", &["[3^6]", "[3^3.4^2]", "[3^2.4.3.4]"]),
    (3, 18, "<3^18>", &["[3^6]"]),
];

/// Partitioned boundary codes of the pentagon–heptagon 2-block.
pub const PENT_HEPT_CODE: &str = "2111211111";
pub const PENT_HEPT_PARTITIONS: [&str; 22] = [
    "21'1'1'21'1'11'1",
    "21'11'21'1'11'1'",
    "21'11'21'11'1'1'",
    "21'1'1'21'11'1'1",
    "21'1'121'1'1'11'",
    "21'11'211'1'1'1'",
    "21'1'1'21'11'11'",
    "21'1'121'1'11'1'",
    "211'1'21'1'1'1'1",
    "21'1'1'211'1'1'1",
    "21'1'121'11'1'1'",
    "211'1'21'1'1'11'",
    "21'1'1'211'1'11'",
    "21'1'1211'1'1'1'",
    "211'1'21'1'11'1'",
    "21'1'1'211'11'1'",
    "21'11'21'1'1'1'1",
    "211'1'21'11'1'1'",
    "21'1'121'1'1'1'1",
    "21'11'21'1'1'11'",
    "211'1'211'1'1'1'",
    "211'121'1'1'1'1'",
];

/// Pentagon types found per node count.
pub const TYPES_PER_N: &[(u32, u32, &[u32])] = &[
    (1, 5, &[1, 2, 4, 5]),
    (1, 6, &[1, 2, 3]),
    (2, 10, &[1, 2, 4, 5, 6, 7, 8, 9]),
    (2, 11, &[1, 2, 4, 13]),
    (2, 12, &[1, 2, 4, 11, 12]),
    (3, 15, &[1, 2, 5, 6, 7, 9]),
    (3, 16, &[1, 2, 3, 4, 5, 6, 15]),
    (3, 17, &[1, 2, 10]),
    (3, 18, &[1, 2, 3, 10, 14]),
];

/// Pentagon types per isohedral type for single-pentagon blocks.
pub const ONE_BLOCK_OUTCOMES: &[(&str, &[u32])] = &[
    ("IH21", &[5]),
    ("IH22", &[1]),
    ("IH23", &[1]),
    ("IH24", &[1]),
    ("IH25", &[1]),
    ("IH26", &[1]),
    ("IH27", &[2]),
    ("IH28", &[4]),
    ("IH29", &[4]),
    ("IH1", &[]),
    ("IH2", &[1]),
    ("IH3", &[2]),
    ("IH4", &[1]),
    ("IH5", &[1]),
    ("IH6", &[1, 2]),
    ("IH7", &[3]),
    ("IH8", &[]),
    ("IH9", &[]),
    ("IH10", &[]),
    ("IH11", &[]),
    ("IH12", &[]),
    ("IH13", &[]),
    ("IH14", &[]),
    ("IH15", &[1]),
    ("IH16", &[3]),
    ("IH17", &[]),
    ("IH18", &[]),
    ("IH20", &[]),
];

/// The 2-block example: form, marked positions, isohedral type, the
/// reduced system and its type.
pub const TWO_BLOCK_EXAMPLE: (&str, &[usize], &str, &str, u32) =
    ("2-57", &[2, 3, 5, 6, 7, 9], "IH6", "2A+B=2π, C=π/2, D=3π/2-A, a=b, e=a-2c", 11);

/// The 3-block example, as above; its system is the new type.
pub const THREE_BLOCK_EXAMPLE: (&str, &[usize], &str, &str) =
    ("3-r556", &[0, 1, 2, 4, 6, 8], "IH5", "2A+B+C=2π, 2E+A=2π, 2D+π=2π, 2C+E=2π, 2B+D=2π, e=b=d, a=e+d");

/// Isohedral types compatible with the two example partitions.
pub const TWO_BLOCK_COMPATIBLE: &[&str] = &["IH4", "IH5", "IH6"];
pub const THREE_BLOCK_COMPATIBLE: &[&str] = &["IH2", "IH5", "IH7", "IH15", "IH16"];

/// The new pentagon: angles in degrees and sides with `a = 1`.
pub const TYPE15_ANGLES_DEG: [f64; 5] = [60.0, 135.0, 105.0, 90.0, 150.0];
pub fn type15_sides() -> [f64; 5] {
    [1.0, 0.5, 1.0 / (2f64.sqrt() * (3f64.sqrt() - 1.0)), 0.5, 0.5]
}

/// Expected triage outcome of an untyped system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triage {
    /// Realizable; closure forces the given type.
    Reclassified(u32),
    /// Infeasible except on one special branch, which is the given type.
    BranchKnown(&'static str, u32),
    Impossible,
}

/// The five untyped systems and how they resolve.
pub const UNTYPED: [(&str, Triage); 5] = [
    ("A=2π/3, B=2π/3, C=π/2, D=2π/3, E=π/2, b=2a, e=d", Triage::Reclassified(3)),
    ("C=π-A/2, D=2π-2B, E=B-A/2, a=b=d=e", Triage::Impossible),
    ("C=π-A, D=B, E=A, b=c, d=e", Triage::Reclassified(2)),
    ("B=π-A/2, C=A/2+π/2, D=π-A, E=π/2, b=2a+d, e=a+d", Triage::BranchKnown("A=π/2", 1)),
    ("B=π-A/2, C=A/2+π/2, D=π-A, E=π/2, b+d=2a, e=a", Triage::Impossible),
];

/// Side values of untyped system 1 with `a = 1`.
pub const UNTYPED_ONE_SIDES: (f64, f64) = (1.0, 1.732_050_807_568_877_2);
