use std::io::{self, BufRead, Write};

use fspcheck_core::analysis::Simulator;
use fspcheck_core::Lts;

const HELP: &str = "\
commands:
  <n>     take option n
  back    undo the last step
  trace   print the actions taken so far
  quit    leave the simulator
  help    show this text";

/// Runs the interactive simulator until `quit` or end of input.
pub fn run(lts: &Lts, input: impl BufRead, out: &mut impl Write) -> io::Result<()> {
    let mut sim = Simulator::new(lts);
    show(&sim, out)?;
    write!(out, "> ")?;
    out.flush()?;
    for line in input.lines() {
        let line = line?;
        match line.trim() {
            "" => {}
            "quit" | "q" | "exit" => return Ok(()),
            "help" | "h" | "?" => writeln!(out, "{HELP}")?,
            "trace" | "t" => {
                let trace = sim.trace();
                if trace.is_empty() {
                    writeln!(out, "(empty trace)")?;
                }
                for label in trace {
                    writeln!(out, "\t{label}")?;
                }
            }
            "back" | "b" => {
                if sim.back() {
                    show(&sim, out)?;
                } else {
                    writeln!(out, "already at the initial state")?;
                }
            }
            other => match other.parse::<usize>() {
                Ok(n) if (1..=sim.options().len()).contains(&n) => {
                    sim.choose(n - 1);
                    show(&sim, out)?;
                }
                _ => writeln!(out, "unrecognised input `{other}`; type help for commands")?,
            },
        }
        write!(out, "> ")?;
        out.flush()?;
    }
    Ok(())
}

fn show(sim: &Simulator<'_>, out: &mut impl Write) -> io::Result<()> {
    let lts = sim.lts();
    writeln!(out, "State: {}", lts.state_name(sim.current()))?;
    if sim.is_error() {
        writeln!(out, "ERROR reached: a property has been violated (back to undo)")?;
        return Ok(());
    }
    let options = sim.options();
    if options.is_empty() {
        writeln!(out, "deadlock: no actions are enabled (back to undo)")?;
        return Ok(());
    }
    for (i, &(l, t)) in options.iter().enumerate() {
        let shared = options.iter().filter(|&&(x, _)| x == l).count() > 1;
        if shared {
            writeln!(out, "  {}. {} -> {}", i + 1, lts.label(l), lts.state_name(t))?;
        } else {
            writeln!(out, "  {}. {}", i + 1, lts.label(l))?;
        }
    }
    Ok(())
}
