//! SVG pictures of the obstruction region and the q-ample cones for Picard
//! rank 2, in the window `[−2, 2]²` of class coordinates.

use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use qamp::cones::{arrangement_cells, cell_dimension, ArrangementCell, ConeUnion, Sign};
use qamp::qample::{obstruction_region, q_ample_cone};
use qamp::{Error, Result, ToricVariety};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureKind {
    /// The closed region `K̄`.
    Obstruction,
    /// `Amp_q`.
    Ample,
}

const WINDOW: i64 = 2;
const SCALE: i64 = 100;

type Point = [BigRational; 2];

fn r(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn side(normal: &[BigInt], p: &Point) -> BigRational {
    BigRational::from_integer(normal[0].clone()) * &p[0] + BigRational::from_integer(normal[1].clone()) * &p[1]
}

/// Sutherland–Hodgman clip of a convex polygon to `normal · x ≥ 0`.
fn clip(poly: Vec<Point>, normal: &[BigInt]) -> Vec<Point> {
    let mut out = Vec::new();
    for k in 0..poly.len() {
        let a = &poly[k];
        let b = &poly[(k + 1) % poly.len()];
        let (sa, sb) = (side(normal, a), side(normal, b));
        if !sa.is_negative() {
            out.push(a.clone());
        }
        if (sa.is_negative() && sb.is_positive()) || (sa.is_positive() && sb.is_negative()) {
            let t = &sa / (&sa - &sb);
            out.push([&a[0] + &t * (&b[0] - &a[0]), &a[1] + &t * (&b[1] - &a[1])]);
        }
    }
    out
}

/// The part of the window inside a two-dimensional cell.
fn sector(cell: &ArrangementCell, hyperplanes: &[Vec<BigInt>]) -> Vec<Point> {
    let w = r(WINDOW);
    let mut poly: Vec<Point> =
        vec![[-w.clone(), -w.clone()], [w.clone(), -w.clone()], [w.clone(), w.clone()], [-w.clone(), w]];
    for (s, n) in cell.signs.iter().zip(hyperplanes) {
        let oriented: Vec<BigInt> = match s {
            Sign::Pos => n.clone(),
            Sign::Neg => n.iter().map(|x| -x).collect(),
            Sign::Zero => continue,
        };
        poly = clip(poly, &oriented);
    }
    poly
}

/// Where the ray through `dir` leaves the window.
fn ray_end(dir: &[BigRational]) -> Point {
    let m = dir.iter().map(|x| x.abs()).max().expect("nonzero direction");
    let t = r(WINDOW) / m;
    [&dir[0] * &t, &dir[1] * &t]
}

fn px(p: &Point) -> (String, String) {
    let x = ((&p[0] + r(WINDOW)) * r(SCALE)).to_f64().unwrap_or(0.0);
    let y = ((r(WINDOW) - &p[1]) * r(SCALE)).to_f64().unwrap_or(0.0);
    (format!("{x:.2}"), format!("{y:.2}"))
}

fn adjacent(ray: &ArrangementCell, cell: &ArrangementCell) -> bool {
    ray.signs.iter().zip(&cell.signs).all(|(a, b)| *a == Sign::Zero || a == b)
}

/// Draws the union of those arrangement cells whose witness satisfies
/// `member`. Boundary rays in the set are solid, those outside it dashed.
fn render(title: &str, hyperplanes: &[Vec<BigInt>], member: impl Fn(&[BigRational]) -> bool) -> String {
    let size = 2 * WINDOW * SCALE;
    let cells = arrangement_cells(2, hyperplanes);
    let dims: Vec<usize> = cells.iter().map(|c| cell_dimension(c, hyperplanes)).collect();
    let inside: Vec<bool> = cells.iter().map(|c| member(&c.witness)).collect();

    let mut s = String::new();
    let _ = writeln!(s, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(s, "<title>{title}</title>");
    let _ = writeln!(s, "<defs><pattern id=\"hatch\" width=\"10\" height=\"10\" patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\"><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"10\" stroke=\"#333\" stroke-width=\"1.5\"/></pattern></defs>");
    let _ = writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{size}\" height=\"{size}\" fill=\"white\" stroke=\"#999\"/>");
    let mid = WINDOW * SCALE;
    let _ = writeln!(s, "<line x1=\"0\" y1=\"{mid}\" x2=\"{size}\" y2=\"{mid}\" stroke=\"#ccc\"/>");
    let _ = writeln!(s, "<line x1=\"{mid}\" y1=\"0\" x2=\"{mid}\" y2=\"{size}\" stroke=\"#ccc\"/>");

    for (k, c) in cells.iter().enumerate() {
        if dims[k] == 2 && inside[k] {
            let pts: Vec<String> = sector(c, hyperplanes)
                .iter()
                .map(|p| {
                    let (x, y) = px(p);
                    format!("{x},{y}")
                })
                .collect();
            let _ = writeln!(s, "<polygon points=\"{}\" fill=\"url(#hatch)\" stroke=\"none\"/>", pts.join(" "));
        }
    }
    for (k, c) in cells.iter().enumerate() {
        if dims[k] != 1 {
            continue;
        }
        let neighbours: Vec<bool> =
            (0..cells.len()).filter(|&j| dims[j] == 2 && adjacent(c, &cells[j])).map(|j| inside[j]).collect();
        let boundary = neighbours.iter().any(|&b| b != inside[k]);
        if !boundary {
            continue;
        }
        let style = if inside[k] { "" } else { " stroke-dasharray=\"8 6\"" };
        let line = c.signs.iter().all(|s| *s == Sign::Zero);
        let dir: Vec<BigRational> = if line {
            let n = &hyperplanes[0];
            vec![BigRational::from_integer(-n[1].clone()), BigRational::from_integer(n[0].clone())]
        } else {
            c.witness.clone()
        };
        let (x, y) = px(&ray_end(&dir));
        let (x0, y0) = if line {
            let neg: Vec<BigRational> = dir.iter().map(|v| -v).collect();
            px(&ray_end(&neg))
        } else {
            (format!("{mid}.00"), format!("{mid}.00"))
        };
        let _ = writeln!(
            s,
            "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{y}\" stroke=\"black\" stroke-width=\"2\"{style}/>"
        );
    }
    if let Some(o) = (0..cells.len()).find(|&k| dims[k] == 0) {
        let fill = if inside[o] { "black" } else { "white" };
        let _ = writeln!(s, "<circle cx=\"{mid}\" cy=\"{mid}\" r=\"4\" fill=\"{fill}\" stroke=\"black\"/>");
    }
    let _ = writeln!(s, "</svg>");
    s
}

pub fn emit_figure(tv: &ToricVariety, q: i64, kind: FigureKind) -> Result<String> {
    if tv.picard_rank() != 2 {
        return Err(Error::UnsupportedRank(tv.picard_rank()));
    }
    let region = obstruction_region(tv, q)?;
    let k_bar: ConeUnion = region.closure(2);
    let hyperplanes = k_bar.hyperplanes();
    Ok(match kind {
        FigureKind::Obstruction => {
            render(&format!("obstruction region, q = {}", region.q), &hyperplanes, |w| k_bar.contains(w))
        }
        FigureKind::Ample => {
            let amp = q_ample_cone(tv, q)?;
            render(&format!("q-ample cone, q = {}", region.q), &hyperplanes, |w| amp.cells.contains(w))
        }
    })
}
