//! Trace documents: JSON records of a reduction's provenance, sufficient
//! to re-run the corresponding back-map without re-deriving the
//! construction. Approximation runs serialize into the same family for
//! post-hoc inspection.

use std::fs;
use std::path::Path;

use nowait_core::embed::HardnessTrace;
use nowait_core::flowshop::FlowshopInstance;
use nowait_core::graph::DummyTrace;
use nowait_core::solve::ApproxRun;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceDoc {
    /// Flowshop-to-ATSP reduction; carries the instance so tours map back
    /// to orders with their makespan.
    NwfsToAtsp {
        instance: FlowshopInstance,
        dummy: DummyTrace,
    },
    /// ATSP-to-flowshop reduction; the trace embeds every intermediate
    /// matrix the back-map chain needs.
    AtspToNwfs { trace: Box<HardnessTrace> },
    /// Record of an approximation run: per-level covers, costs,
    /// representatives, and the final tour and order.
    ApproxRun {
        jobs: usize,
        machines: usize,
        run: ApproxRun,
    },
}

impl TraceDoc {
    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, serde_json::to_string_pretty(self).expect("traces serialize"))
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}
