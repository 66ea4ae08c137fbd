use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "assocf",
    version,
    about = "Thompson's group F and the associativity of finite bracket algebras"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Print a JSON CommandResult instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for randomized phases.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,

    /// Worker threads for exhaustive sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Search budget in added carets.
    #[arg(long, global = true)]
    pub budget: Option<usize>,

    /// Largest arity for law searches.
    #[arg(long, global = true)]
    pub arity_cap: Option<usize>,

    /// Largest tuple space swept exhaustively; 0 removes the guard.
    #[arg(long, global = true)]
    pub cost_limit: Option<u128>,

    /// Write an SVG picture where one is available.
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Binary trees.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Elements of F, given as `pair P Q` or as a word such as `[x0,x1]`.
    #[command(subcommand)]
    F(FCmd),
    /// Finite magmas read from a table file.
    #[command(subcommand)]
    Magma(MagmaCmd),
    /// Varieties presented by strongly regular laws.
    #[command(subcommand)]
    Variety(VarietyCmd),
    /// Built-in example magmas.
    #[command(subcommand)]
    Zoo(ZooCmd),
}

#[derive(Debug, Subcommand)]
pub enum TreeCmd {
    /// Parse and describe a tree.
    Parse { tree: String },
    /// Apply elementary expansions, in the order given.
    Expand {
        tree: String,
        #[arg(required = true)]
        indices: Vec<usize>,
    },
    /// Graft as the left (0) or right (1) child of a new root.
    Shift { tree: String, side: String },
    /// Mirror image.
    Reflect { tree: String },
    /// Smallest common expansion.
    Join { a: String, b: String },
    /// All trees with n leaves.
    Enumerate { n: usize },
}

#[derive(Debug, Subcommand)]
pub enum FCmd {
    /// Product, left factor applied first.
    Mul {
        #[arg(required = true)]
        elements: Vec<String>,
    },
    Inv {
        element: String,
    },
    /// Evaluate a word in x0, x1, …, c0, c1.
    Word {
        word: String,
        /// Print the abelianization instead of the pair.
        #[arg(long)]
        ab: bool,
    },
    /// Image in Z × Z.
    Ab {
        element: String,
    },
    /// Piecewise-linear map.
    Pl {
        element: String,
    },
    /// Reduce a tree pair.
    Reduce {
        p: String,
        q: String,
    },
    /// Images under the shift endomorphisms s0 and s1.
    Shifts {
        element: String,
    },
    /// Membership in the normal subgroup given by (m, n).
    NormalMember {
        element: String,
        m: u64,
        n: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum MagmaCmd {
    /// Check a law `TREE = TREE` exhaustively.
    Check { file: PathBuf, law: String },
    /// Whether a law holds after some simultaneous expansion.
    Eventual {
        file: PathBuf,
        law: String,
        /// Search expansions even for simply perfect magmas.
        #[arg(long)]
        no_shortcut: bool,
    },
    /// Derived chain and solvability witness.
    Solvable { file: PathBuf },
    /// Classify Assoc(S).
    Status { file: PathBuf },
    /// All nontrivial laws of the given arity.
    Search { file: PathBuf, arity: usize },
    /// Elements x with [x, u] = zero for every listed u.
    Centralizer {
        file: PathBuf,
        #[arg(long)]
        zero: String,
        elements: Vec<String>,
    },
    /// Image of a tree with some positions fixed, e.g. `2=a` (1-based).
    Image {
        file: PathBuf,
        tree: String,
        fixed: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum VarietyCmd {
    /// Derive q from p; with --budget, search simultaneous expansions too.
    Derivable {
        file: PathBuf,
        p: String,
        q: String,
        /// Refuse at once when root splits differ and every law keeps them.
        #[arg(long)]
        prune: bool,
    },
    /// Bounded membership in the shift-invariant subgroup generated by K.
    Member {
        element: String,
        #[arg(short = 'k', long = "gen", required = true)]
        generators: Vec<String>,
    },
    /// Products of shifted generators (and inverses).
    Closure {
        #[arg(required = true)]
        generators: Vec<String>,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ZooCmd {
    List,
    /// Print a built-in magma in the table file format.
    Emit {
        name: String,
    },
}
