//! Voxel spacecraft domain: fixed-length block genomes on a small lattice,
//! hard constraints (no colocated blocks, required block types present),
//! kernel-based feasible fitness with a soft symmetry bonus, and axis-ratio
//! behavior descriptors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::{Domain, Evaluation};
use crate::error::{Error, Result};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockType {
    Cockpit,
    Engine,
    Thruster,
    Armor,
    Container,
}

impl BlockType {
    pub const ALL: [BlockType; 5] = [
        BlockType::Cockpit,
        BlockType::Engine,
        BlockType::Thruster,
        BlockType::Armor,
        BlockType::Container,
    ];

    /// Block types every structure must contain.
    pub const REQUIRED: [BlockType; 3] =
        [BlockType::Cockpit, BlockType::Engine, BlockType::Thruster];

    pub fn is_functional(&self) -> bool {
        matches!(
            self,
            BlockType::Cockpit | BlockType::Engine | BlockType::Thruster
        )
    }

    pub fn label(&self) -> &'static str {
        match self {
            BlockType::Cockpit => "COCKPIT",
            BlockType::Engine => "ENGINE",
            BlockType::Thruster => "THRUSTER",
            BlockType::Armor => "ARMOR",
            BlockType::Container => "CONTAINER",
        }
    }

    fn index(&self) -> usize {
        match self {
            BlockType::Cockpit => 0,
            BlockType::Engine => 1,
            BlockType::Thruster => 2,
            BlockType::Armor => 3,
            BlockType::Container => 4,
        }
    }
}

pub type Cell = (u8, u8, u8);

/// One gene: a lattice cell, a block type, and whether the gene is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VoxelGene {
    pub cell: Cell,
    pub block: BlockType,
    pub active: bool,
}

/// Fixed-length list of block genes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoxelGenome {
    pub genes: Vec<VoxelGene>,
}

impl VoxelGenome {
    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn active_count(&self) -> usize {
        self.genes.iter().filter(|g| g.active).count()
    }
}

/// Decoded phenotype: the expressed blocks, duplicates preserved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoxelStructure {
    pub blocks: Vec<(Cell, BlockType)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A lattice cell holding two or more blocks.
    Intersection { cell: Cell },
    MissingRequired(BlockType),
}

/// The four structure metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricVector {
    /// Functional blocks over total blocks, in [0, 1].
    pub functional_ratio: f64,
    /// Distinct filled cells over bounding-box volume, in (0, 1].
    pub fill_ratio: f64,
    /// Major over medium bounding-box extent, >= 1.
    pub major_medium_ratio: f64,
    /// Major over smallest bounding-box extent, >= major_medium_ratio.
    pub major_smallest_ratio: f64,
}

impl MetricVector {
    pub fn as_array(&self) -> [f64; 4] {
        [
            self.functional_ratio,
            self.fill_ratio,
            self.major_medium_ratio,
            self.major_smallest_ratio,
        ]
    }
}

/// Kernel parameters of the feasible fitness plus the symmetry bonus weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitnessTargets {
    pub centers: [f64; 4],
    pub widths: [f64; 4],
    pub symmetry_weight: f64,
}

impl Default for FitnessTargets {
    fn default() -> Self {
        Self {
            centers: [0.5, 0.5, 1.5, 2.0],
            widths: [0.2, 0.2, 0.5, 0.8],
            symmetry_weight: 1.0,
        }
    }
}

/// Voxel domain over a `lattice^3` grid with `genome_len` block genes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VoxelDomain {
    pub lattice: u8,
    pub genome_len: usize,
    pub targets: FitnessTargets,
}

impl Default for VoxelDomain {
    fn default() -> Self {
        Self {
            lattice: 8,
            genome_len: 32,
            targets: FitnessTargets::default(),
        }
    }
}

/// Emits one block per active gene; coordinates are clamped to the lattice.
pub fn decode(genome: &VoxelGenome, lattice: u8) -> Result<VoxelStructure> {
    let max = lattice.saturating_sub(1);
    let blocks: Vec<(Cell, BlockType)> = genome
        .genes
        .iter()
        .filter(|g| g.active)
        .map(|g| {
            (
                (g.cell.0.min(max), g.cell.1.min(max), g.cell.2.min(max)),
                g.block,
            )
        })
        .collect();
    if blocks.is_empty() {
        return Err(Error::InvalidGenome("no active genes".into()));
    }
    Ok(VoxelStructure { blocks })
}

/// Hard-constraint check: one violation per cell holding two or more blocks,
/// plus one per missing required block type. Symmetry is a soft constraint
/// and never appears here.
pub fn constraint_violations(structure: &VoxelStructure) -> Vec<Violation> {
    let mut per_cell: BTreeMap<Cell, usize> = BTreeMap::new();
    for (cell, _) in &structure.blocks {
        *per_cell.entry(*cell).or_insert(0) += 1;
    }
    let mut violations: Vec<Violation> = per_cell
        .iter()
        .filter(|(_, &count)| count >= 2)
        .map(|(&cell, _)| Violation::Intersection { cell })
        .collect();
    for required in BlockType::REQUIRED {
        if !structure.blocks.iter().any(|(_, b)| *b == required) {
            violations.push(Violation::MissingRequired(required));
        }
    }
    violations
}

fn bounding_box(structure: &VoxelStructure) -> ((u8, u8, u8), (u8, u8, u8)) {
    let mut lo = (u8::MAX, u8::MAX, u8::MAX);
    let mut hi = (0u8, 0u8, 0u8);
    for ((x, y, z), _) in &structure.blocks {
        lo = (lo.0.min(*x), lo.1.min(*y), lo.2.min(*z));
        hi = (hi.0.max(*x), hi.1.max(*y), hi.2.max(*z));
    }
    (lo, hi)
}

fn distinct_cells(structure: &VoxelStructure) -> Vec<Cell> {
    let mut cells: Vec<Cell> = structure.blocks.iter().map(|(c, _)| *c).collect();
    cells.sort_unstable();
    cells.dedup();
    cells
}

pub fn metrics(structure: &VoxelStructure) -> Result<MetricVector> {
    if structure.blocks.is_empty() {
        return Err(Error::InvalidStructure);
    }
    let total = structure.blocks.len() as f64;
    let functional = structure
        .blocks
        .iter()
        .filter(|(_, b)| b.is_functional())
        .count() as f64;

    let (lo, hi) = bounding_box(structure);
    let extents = [
        (hi.0 - lo.0) as f64 + 1.0,
        (hi.1 - lo.1) as f64 + 1.0,
        (hi.2 - lo.2) as f64 + 1.0,
    ];
    let mut sorted = extents;
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let [major, medium, smallest] = sorted;

    let volume = extents[0] * extents[1] * extents[2];
    let filled = distinct_cells(structure).len() as f64;

    Ok(MetricVector {
        functional_ratio: functional / total,
        fill_ratio: filled / volume,
        major_medium_ratio: major / medium,
        major_smallest_ratio: major / smallest,
    })
}

/// Best axis-reflection overlap in [0, 1]: the fraction of filled cells that
/// map onto filled cells when reflected about the bounding-box mid-plane,
/// maximized over the three axes.
pub fn symmetry_score(structure: &VoxelStructure) -> f64 {
    let cells = distinct_cells(structure);
    if cells.is_empty() {
        return 0.0;
    }
    let (lo, hi) = bounding_box(structure);
    let filled: std::collections::BTreeSet<Cell> = cells.iter().copied().collect();
    let mut best = 0.0f64;
    for axis in 0..3 {
        let matched = cells
            .iter()
            .filter(|&&(x, y, z)| {
                let reflected = match axis {
                    0 => (lo.0 + hi.0 - x, y, z),
                    1 => (x, lo.1 + hi.1 - y, z),
                    _ => (x, y, lo.2 + hi.2 - z),
                };
                filled.contains(&reflected)
            })
            .count();
        best = best.max(matched as f64 / cells.len() as f64);
    }
    best
}

/// Sum of Gaussian kernels over the four metrics plus the weighted symmetry
/// bonus. Always positive, bounded by `4 + symmetry_weight`.
pub fn feasible_fitness(
    mv: &MetricVector,
    structure: &VoxelStructure,
    targets: &FitnessTargets,
) -> f64 {
    let kernels: f64 = mv
        .as_array()
        .iter()
        .zip(targets.centers.iter().zip(targets.widths.iter()))
        .map(|(m, (mu, sigma))| (-(m - mu).powi(2) / (2.0 * sigma * sigma)).exp())
        .sum();
    kernels + targets.symmetry_weight * symmetry_score(structure)
}

/// Behavior descriptor: the two axis ratios.
pub fn behavior(mv: &MetricVector) -> (f64, f64) {
    (mv.major_medium_ratio, mv.major_smallest_ratio)
}

/// Surrogate input vector, 12 dimensions, all scaled to [0, 1]:
/// per-type block counts (5), total blocks (1), the four metrics (4),
/// intersection violations (1), missing required types (1).
pub fn features(
    structure: &VoxelStructure,
    violations: &[Violation],
    genome_len: usize,
    lattice: u8,
) -> Result<Vec<f64>> {
    if structure.blocks.is_empty() {
        return Err(Error::InvalidStructure);
    }
    let mv = metrics(structure)?;
    let len = genome_len.max(1) as f64;
    let mut type_counts = [0usize; 5];
    for (_, block) in &structure.blocks {
        type_counts[block.index()] += 1;
    }
    let intersections = violations
        .iter()
        .filter(|v| matches!(v, Violation::Intersection { .. }))
        .count() as f64;
    let missing = violations
        .iter()
        .filter(|v| matches!(v, Violation::MissingRequired(_)))
        .count() as f64;
    let max_intersections = ((genome_len / 2).max(1)) as f64;

    let mut out = Vec::with_capacity(12);
    out.extend(type_counts.iter().map(|&c| c as f64 / len));
    out.push(structure.blocks.len() as f64 / len);
    out.push(mv.functional_ratio);
    out.push(mv.fill_ratio);
    out.push(mv.major_medium_ratio / lattice as f64);
    out.push(mv.major_smallest_ratio / lattice as f64);
    out.push(intersections / max_intersections);
    out.push(missing / 3.0);
    Ok(out)
}

/// One-point crossover at a uniform gene index; index 0 swaps the parents
/// whole. Children with no active gene get one re-activated.
pub fn crossover(
    a: &VoxelGenome,
    b: &VoxelGenome,
    rng: &mut RngStream,
) -> Result<(VoxelGenome, VoxelGenome)> {
    if a.len() != b.len() {
        return Err(Error::GenomeMismatch(a.len(), b.len()));
    }
    let cut = rng.index(a.len());
    let mut c1 = VoxelGenome {
        genes: a.genes[..cut]
            .iter()
            .chain(b.genes[cut..].iter())
            .copied()
            .collect(),
    };
    let mut c2 = VoxelGenome {
        genes: b.genes[..cut]
            .iter()
            .chain(a.genes[cut..].iter())
            .copied()
            .collect(),
    };
    repair(&mut c1, rng);
    repair(&mut c2, rng);
    Ok((c1, c2))
}

/// Per-gene mutation with probability `rate`. A mutation is one of: flip the
/// active flag (25%), step one coordinate by +-1 clamped (50%), or re-draw
/// the block type (25%). Output always has at least one active gene.
pub fn mutate(genome: &VoxelGenome, rate: f64, lattice: u8, rng: &mut RngStream) -> VoxelGenome {
    let mut out = genome.clone();
    for gene in &mut out.genes {
        if !rng.chance(rate) {
            continue;
        }
        let kind = rng.next_f64();
        if kind < 0.25 {
            gene.active = !gene.active;
        } else if kind < 0.75 {
            let axis = rng.index(3);
            let delta: i16 = if rng.chance(0.5) { 1 } else { -1 };
            let coord = match axis {
                0 => &mut gene.cell.0,
                1 => &mut gene.cell.1,
                _ => &mut gene.cell.2,
            };
            *coord = (*coord as i16 + delta).clamp(0, lattice as i16 - 1) as u8;
        } else {
            gene.block = BlockType::ALL[rng.index(BlockType::ALL.len())];
        }
    }
    repair(&mut out, rng);
    out
}

/// Re-activates a random gene if none is active.
fn repair(genome: &mut VoxelGenome, rng: &mut RngStream) {
    if genome.active_count() == 0 && !genome.is_empty() {
        let idx = rng.index(genome.len());
        genome.genes[idx].active = true;
    }
}

/// Writes the structure as plain text, one block per line: `x y z TYPE`.
pub fn export_structure(structure: &VoxelStructure, path: &Path) -> Result<()> {
    let mut file =
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    for ((x, y, z), block) in &structure.blocks {
        writeln!(file, "{} {} {} {}", x, y, z, block.label())
            .map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    Ok(())
}

impl Domain for VoxelDomain {
    type Genome = VoxelGenome;

    fn sample(&self, rng: &mut RngStream) -> VoxelGenome {
        let mut genome = VoxelGenome {
            genes: (0..self.genome_len)
                .map(|_| VoxelGene {
                    cell: (
                        rng.index(self.lattice as usize) as u8,
                        rng.index(self.lattice as usize) as u8,
                        rng.index(self.lattice as usize) as u8,
                    ),
                    block: BlockType::ALL[rng.index(BlockType::ALL.len())],
                    active: rng.chance(0.5),
                })
                .collect(),
        };
        repair(&mut genome, rng);
        genome
    }

    fn evaluate(&self, genome: &VoxelGenome) -> Result<Evaluation> {
        let structure = decode(genome, self.lattice)?;
        let violations = constraint_violations(&structure);
        let mv = metrics(&structure)?;
        Ok(Evaluation {
            violations: violations.len() as u32,
            feasible_fitness: feasible_fitness(&mv, &structure, &self.targets),
            behavior: behavior(&mv),
            features: features(&structure, &violations, self.genome_len, self.lattice)?,
        })
    }

    fn crossover(
        &self,
        a: &VoxelGenome,
        b: &VoxelGenome,
        rng: &mut RngStream,
    ) -> Result<(VoxelGenome, VoxelGenome)> {
        crossover(a, b, rng)
    }

    fn mutate(&self, genome: &VoxelGenome, rate: f64, rng: &mut RngStream) -> VoxelGenome {
        mutate(genome, rate, self.lattice, rng)
    }

    fn feature_dim(&self) -> usize {
        12
    }
}
