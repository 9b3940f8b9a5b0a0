//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 3
//! #reg b 0-2 target
//! #block begin qft
//! h 2
//! cp 1 2 1/2^2
//! #block end qft
//! ```
//!
//! Other `#` lines are comments and are dropped by the parser.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use super::{Circuit, Marker, MarkerKind};
use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::gate::Gate;

fn qubit_list(qs: &[usize]) -> String {
    let contiguous = qs.len() > 1 && qs.windows(2).all(|w| w[1] == w[0] + 1);
    if contiguous {
        format!("{}-{}", qs[0], qs[qs.len() - 1])
    } else {
        qs.iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn parse_qubit_list(s: &str) -> Option<Vec<usize>> {
    if let Some((a, b)) = s.split_once('-') {
        let (a, b): (usize, usize) = (a.parse().ok()?, b.parse().ok()?);
        (a < b).then(|| (a..=b).collect())
    } else {
        s.split(',').map(|q| q.parse().ok()).collect()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        writeln!(out, "qubits {}", self.width)?;
        for r in self.registers.iter() {
            write!(out, "#reg {} {}", r.name, qubit_list(&r.qubits))?;
            if !r.role.is_empty() {
                write!(out, " {}", r.role)?;
            }
            out.push('\n');
        }
        let mut markers = self.markers.iter().peekable();
        let write_marker = |out: &mut String, m: &Marker| {
            let kind = match m.kind {
                MarkerKind::Begin => "begin",
                MarkerKind::End => "end",
            };
            writeln!(out, "#block {kind} {}", m.tag)
        };
        for (i, g) in self.gates.iter().enumerate() {
            while let Some(m) = markers.next_if(|m| m.pos == i) {
                write_marker(&mut out, m)?;
            }
            writeln!(out, "{g}")?;
        }
        for m in markers {
            write_marker(&mut out, m)?;
        }
        f.write_str(&out)
    }
}

fn parse_index(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: "missing operand".into(),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad qubit index `{tok}`"),
    })
}

fn parse_bit(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.unwrap_or_default();
    tok.strip_prefix('m')
        .and_then(|b| b.parse().ok())
        .ok_or_else(|| Error::Parse {
            line,
            msg: format!("bad measurement reference `{tok}`"),
        })
}

fn parse_angle(tok: Option<&str>, line: usize) -> Result<Angle> {
    tok.unwrap_or_default()
        .parse()
        .map_err(|msg| Error::Parse { line, msg })
}

fn parse_gate(text: &str, line: usize) -> Result<Gate> {
    let mut it = text.split(' ');
    let op = it.next().unwrap_or_default();
    let mut q = || parse_index(it.next(), line);
    let gate = match op {
        "h" => Gate::H(q()?),
        "x" => Gate::X(q()?),
        "cx" => Gate::cnot(q()?, q()?),
        "swap" => Gate::Swap(q()?, q()?),
        "cswap" => Gate::cswap(q()?, q()?, q()?),
        "ccx" => Gate::toffoli(q()?, q()?, q()?),
        _ => {
            let mut it = text.split(' ').skip(1);
            match op {
                "p" => {
                    let t = parse_index(it.next(), line)?;
                    Gate::phase(t, parse_angle(it.next(), line)?)
                }
                "cp" => {
                    let c = parse_index(it.next(), line)?;
                    let t = parse_index(it.next(), line)?;
                    Gate::cphase(c, t, parse_angle(it.next(), line)?)
                }
                "ccp" => {
                    let c1 = parse_index(it.next(), line)?;
                    let c2 = parse_index(it.next(), line)?;
                    let t = parse_index(it.next(), line)?;
                    if c1 > c2 {
                        return Err(Error::Parse {
                            line,
                            msg: "ccp controls must be ascending".into(),
                        });
                    }
                    Gate::ccphase(c1, c2, t, parse_angle(it.next(), line)?)
                }
                "measure" => {
                    let qubit = parse_index(it.next(), line)?;
                    if it.next() != Some("->") {
                        return Err(Error::Parse {
                            line,
                            msg: "expected `->` in measure".into(),
                        });
                    }
                    Gate::Measure {
                        qubit,
                        bit: parse_bit(it.next(), line)?,
                    }
                }
                "cx?" => {
                    let bit = parse_bit(it.next(), line)?;
                    Gate::ClassicX {
                        bit,
                        target: parse_index(it.next(), line)?,
                    }
                }
                "cp?" => {
                    let bit = parse_bit(it.next(), line)?;
                    let target = parse_index(it.next(), line)?;
                    Gate::ClassicPhase {
                        bit,
                        target,
                        angle: parse_angle(it.next(), line)?,
                    }
                }
                _ => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("unknown gate `{op}`"),
                    })
                }
            }
        }
    };
    Ok(gate)
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Circuit> {
        let mut lines = s.lines().enumerate().map(|(i, l)| (i + 1, l));
        let width = loop {
            match lines.next() {
                Some((_, l))
                    if l.trim().is_empty()
                        || (l.starts_with('#')
                            && !l.starts_with("#block")
                            && !l.starts_with("#reg")) =>
                {
                    continue
                }
                Some((n, l)) => {
                    break l
                        .strip_prefix("qubits ")
                        .and_then(|w| w.trim().parse::<usize>().ok())
                        .ok_or(Error::Parse {
                            line: n,
                            msg: "expected `qubits N` header".into(),
                        })?
                }
                None => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: "empty input".into(),
                    })
                }
            }
        };
        let mut c = Circuit::new(width);
        for (n, raw) in lines {
            let l = raw.trim_end();
            if l.is_empty() {
                continue;
            }
            if let Some(rest) = l.strip_prefix("#block ") {
                let err = || Error::Parse {
                    line: n,
                    msg: format!("bad block marker `{l}`"),
                };
                match rest.split_once(' ') {
                    Some(("begin", tag)) if !tag.is_empty() => c.begin_block(tag),
                    Some(("end", tag)) => {
                        if c.open.last().map(String::as_str) != Some(tag) {
                            return Err(err());
                        }
                        c.end_block();
                    }
                    _ => return Err(err()),
                }
            } else if let Some(rest) = l.strip_prefix("#reg ") {
                let mut parts = rest.splitn(3, ' ');
                let name = parts.next().unwrap_or_default();
                let qubits = parts
                    .next()
                    .and_then(parse_qubit_list)
                    .ok_or(Error::Parse {
                        line: n,
                        msg: format!("bad register line `{l}`"),
                    })?;
                let role = parts.next().unwrap_or_default();
                c.add_register(name, qubits, role)
                    .map_err(|e| Error::Parse {
                        line: n,
                        msg: e.to_string(),
                    })?;
            } else if l.starts_with('#') {
                continue;
            } else {
                let g = parse_gate(l, n)?;
                c.try_push(g).map_err(|e| Error::Parse {
                    line: n,
                    msg: e.to_string(),
                })?;
            }
        }
        if let Some(tag) = c.open.last() {
            return Err(Error::Parse {
                line: 0,
                msg: format!("block `{tag}` never closed"),
            });
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "qubits 4
#reg b 0-2 target
#reg c 3
#block begin add
#block begin empty
#block end empty
h 0
x 1
cx 3 0
swap 1 2
cswap 3 0 1
ccx 0 1 2
p 0 1/2^1
cp 3 1 3/2^3
ccp 0 3 2 5/2^4
measure 0 -> m0
cx? m0 1
cp? m0 2 1/2^2
#block end add
";

    #[test]
    fn round_trip_is_byte_identical() {
        let c: Circuit = SAMPLE.parse().unwrap();
        assert_eq!(c.to_string(), SAMPLE);
        assert_eq!(c.len(), 12);
        assert_eq!(c.reg("b"), &[0, 1, 2]);
    }

    #[test]
    fn comments_are_ignored() {
        let c: Circuit = "# hello\nqubits 1\n# note\nh 0\n".parse().unwrap();
        assert_eq!(c.to_string(), "qubits 1\nh 0\n");
    }

    #[test]
    fn parse_errors_carry_line() {
        let e = "qubits 2\nh 0\nfoo 1\n".parse::<Circuit>().unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 3,
                msg: "unknown gate `foo`".into()
            }
        );
        assert!("qubits 2\nh 2\n".parse::<Circuit>().is_err());
        assert!("qubits 2\n#block begin a\nh 0\n"
            .parse::<Circuit>()
            .is_err());
        assert!("qubits 3\nccp 2 1 0 1/2^1\n".parse::<Circuit>().is_err());
    }
}
