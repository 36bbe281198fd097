use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use wm_core::axioms::{Axiom4, Semantics};
use wm_core::props::PropositionId;
use wm_core::subgroups::Side;

/// Verify, enumerate and audit finite Wm-groups.
///
/// INPUT is a `wmtable v1` file or a built-in written NAME[:PARAM],
/// e.g. `cyclic:4`, `abelian_product:2,2`, `involution_rows:4:1,0,3,2`.
#[derive(Debug, Parser)]
#[command(name = "wm", version, propagate_version = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Reading of axiom 4.
    #[arg(long, global = true, default_value_t = Axiom4::Strong)]
    pub axiom4: Axiom4,
    /// How `m⁻¹ * r` is evaluated in proposition checks.
    #[arg(long, global = true, default_value = "product")]
    pub semantics: Semantics,
    /// Emit one JSON document on stdout instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Report every witness, not only the first per axiom or proposition.
    #[arg(long, global = true)]
    pub all_witnesses: bool,
    /// Worker threads for `enumerate` and `props` (0: all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Override the order cap of the command's search.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the four axioms.
    Check { input: String },
    /// Identities, inverses and [G] of a Wm-group.
    Info { input: String },
    /// List Wm-subgroups.
    Subgroups {
        input: String,
        /// Only normal Wm-subgroups.
        #[arg(long)]
        normal: bool,
        #[arg(long)]
        count_only: bool,
    },
    /// Cosets of a subgroup and the relation K.
    Cosets {
        input: String,
        /// Comma-separated element names or indices.
        #[arg(long)]
        subgroup: String,
        #[arg(long, default_value = "right")]
        side: Side,
    },
    /// The quotient G|S by right cosets.
    Quotient {
        input: String,
        #[arg(long)]
        subgroup: String,
    },
    /// Homomorphisms between two Wm-groups, with their kernels.
    Homs {
        source: String,
        target: String,
        /// Only injective homomorphisms.
        #[arg(long)]
        iso: bool,
        #[arg(long)]
        count_only: bool,
    },
    /// All Wm-groups of one order, up to isomorphism.
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        count_only: bool,
        /// Allow order 6.
        #[arg(long)]
        long_run: bool,
        /// Also list classes that pass only the weak reading.
        #[arg(long)]
        diff: bool,
        /// Write one wmtable per class plus summary.json into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Audit the derived propositions.
    Props(PropsArgs),
    /// Built-in instances.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Args)]
pub struct PropsArgs {
    /// Instances to audit (default: every built-in positive control).
    pub inputs: Vec<String>,
    /// Restrict to these ids (repeatable).
    #[arg(long = "id")]
    pub ids: Vec<PropositionId>,
    /// Also audit every enumerated class of order 1..=N.
    #[arg(long, value_name = "N")]
    pub enumerated: Option<usize>,
    /// Bind the first subgroup of the checked ids (one input only).
    #[arg(long)]
    pub subgroup: Option<String>,
    /// Hom target for hom checks (one input only).
    #[arg(long)]
    pub target: Option<String>,
    /// Exit 1 when any verdict fails.
    #[arg(long)]
    pub strict: bool,
    /// Report the kernel of every hom between the inputs instead.
    #[arg(long)]
    pub kernels: bool,
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// Names and parameters of the built-ins.
    List,
    /// Print a built-in as a wmtable.
    Emit {
        name: String,
        #[arg(long)]
        param: Option<String>,
    },
}
