use std::fmt;
use std::path::Path;

use commsemi::abelian::AbelianError;
use commsemi::closure::ClosureError;
use commsemi::cyclic::CyclicError;
use commsemi::extension::ExtensionError;
use commsemi::rewriting::RewriteError;
use commsemi::semigroup::SemigroupError;
use commsemi::structure::StructureError;
use commsemi::zn::ZnError;
use commsemi::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Exit code 1.
    Domain,
    /// Exit code 2.
    Input,
}

/// Every failure names the module it came from and a message carrying the witness.
#[derive(Debug, Clone)]
pub struct CliError {
    pub kind: Kind,
    pub module: &'static str,
    pub message: String,
}

impl CliError {
    pub fn domain(module: &'static str, message: impl fmt::Display) -> CliError {
        CliError { kind: Kind::Domain, module, message: message.to_string() }
    }

    pub fn input(module: &'static str, message: impl fmt::Display) -> CliError {
        CliError { kind: Kind::Input, module, message: message.to_string() }
    }

    pub fn io(path: &Path, e: std::io::Error) -> CliError {
        CliError::input("io", format!("{}: {e}", path.display()))
    }

    pub fn in_file(mut self, path: &Path) -> CliError {
        if self.kind == Kind::Input {
            self.message = format!("{}: {}", path.display(), self.message);
        }
        self
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind {
            Kind::Domain => 1,
            Kind::Input => 2,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "error": {
                "kind": match self.kind { Kind::Domain => "domain", Kind::Input => "input" },
                "module": self.module,
                "message": self.message,
            }
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.module, self.message)
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::input("parse", e)
    }
}

impl From<RewriteError> for CliError {
    fn from(e: RewriteError) -> Self {
        CliError::domain("rewriting", e)
    }
}

impl From<SemigroupError> for CliError {
    fn from(e: SemigroupError) -> Self {
        match e {
            SemigroupError::Rewrite(r) => r.into(),
            e => CliError::domain("core_semigroup", e),
        }
    }
}

impl From<StructureError> for CliError {
    fn from(e: StructureError) -> Self {
        CliError::domain("structure_recipe", e)
    }
}

impl From<AbelianError> for CliError {
    fn from(e: AbelianError) -> Self {
        CliError::domain("abelian", e)
    }
}

impl From<CyclicError> for CliError {
    fn from(e: CyclicError) -> Self {
        match e {
            CyclicError::Parse(p) => p.into(),
            e => CliError::domain("cyclic_hom", e),
        }
    }
}

impl From<ExtensionError> for CliError {
    fn from(e: ExtensionError) -> Self {
        CliError::domain("ideal_extension", e)
    }
}

impl From<ZnError> for CliError {
    fn from(e: ZnError) -> Self {
        CliError::domain("zn", e)
    }
}

impl From<ClosureError> for CliError {
    fn from(e: ClosureError) -> Self {
        match e {
            ClosureError::Parse(p) => p.into(),
            e => CliError::domain("semilattice_closure", e),
        }
    }
}
