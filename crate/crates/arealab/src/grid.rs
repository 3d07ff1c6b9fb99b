//! Grid-sampled fields with bilinear interpolation.
//!
//! File format (plain text): first line `nx ny x_lo x_hi y_lo y_hi`,
//! followed by `nx·ny` whitespace-separated reals, row-major with x fastest.

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::field::{Regularity, ScalarField};
use std::sync::Arc;

/// Node values on a uniform grid; evaluation bilinearly interpolates and is
/// exact at the nodes. Values are accepted as-is, no clamping.
#[derive(Debug, Clone)]
pub struct GridField {
    domain: Domain,
    nx: usize,
    ny: usize,
    values: Arc<Vec<f64>>,
}

impl GridField {
    /// `values` is row-major with x fastest: node (i, j) at index `j*nx + i`
    /// sits at `(x_lo + i·Δx, y_lo + j·Δy)`.
    pub fn new(domain: Domain, nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidInput(format!(
                "grid needs nx, ny >= 2, got {nx} x {ny}"
            )));
        }
        if values.len() != nx * ny {
            return Err(Error::InvalidInput(format!(
                "grid expects {} values, got {}",
                nx * ny,
                values.len()
            )));
        }
        Ok(GridField {
            domain,
            nx,
            ny,
            values: Arc::new(values),
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn node_value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        let ncx = self.nx - 1;
        let ncy = self.ny - 1;
        let fx = (x - self.domain.x_lo) / self.domain.width() * ncx as f64;
        let fy = (y - self.domain.y_lo) / self.domain.height() * ncy as f64;
        let i = (fx.floor() as isize).clamp(0, ncx as isize - 1) as usize;
        let j = (fy.floor() as isize).clamp(0, ncy as isize - 1) as usize;
        let u = fx - i as f64;
        let v = fy - j as f64;
        let z00 = self.node_value(i, j);
        let z10 = self.node_value(i + 1, j);
        let z01 = self.node_value(i, j + 1);
        let z11 = self.node_value(i + 1, j + 1);
        (1.0 - v) * ((1.0 - u) * z00 + u * z10) + v * ((1.0 - u) * z01 + u * z11)
    }

    pub fn to_field(&self) -> ScalarField {
        let g = self.clone();
        ScalarField::new(
            format!("grid({}x{})", self.nx, self.ny),
            self.domain,
            Regularity::Continuous,
            move |x, y| g.value(x, y),
        )
    }

    /// Parse the plain-text format. Errors carry 1-based line and column of
    /// the offending token.
    pub fn parse(text: &str) -> Result<GridField> {
        let mut tokens = Tokens::new(text);
        let nx = tokens.next_usize("nx")?;
        let ny = tokens.next_usize("ny")?;
        let x_lo = tokens.next_f64("x_lo")?;
        let x_hi = tokens.next_f64("x_hi")?;
        let y_lo = tokens.next_f64("y_lo")?;
        let y_hi = tokens.next_f64("y_hi")?;
        let domain = Domain::new(x_lo, x_hi, y_lo, y_hi).map_err(|e| Error::GridParse {
            line: 1,
            col: 1,
            msg: e.to_string(),
        })?;
        if nx < 2 || ny < 2 {
            return Err(Error::GridParse {
                line: 1,
                col: 1,
                msg: format!("grid needs nx, ny >= 2, got {nx} x {ny}"),
            });
        }
        let mut values = Vec::with_capacity(nx * ny);
        for _ in 0..nx * ny {
            values.push(tokens.next_f64("value")?);
        }
        if let Some((line, col, tok)) = tokens.peek() {
            return Err(Error::GridParse {
                line,
                col,
                msg: format!("trailing token `{tok}` after {} values", nx * ny),
            });
        }
        GridField::new(domain, nx, ny, values)
    }
}

struct Tokens<'a> {
    items: Vec<(usize, usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let mut items = Vec::new();
        let mut last_line = 1;
        for (ln, line) in text.lines().enumerate() {
            let mut col = 1;
            for piece in line.split_whitespace() {
                // byte offset of the token within the line, 1-based
                let off = unsafe { piece.as_ptr().offset_from(line.as_ptr()) } as usize + 1;
                col = off;
                items.push((ln + 1, col, piece));
            }
            let _ = col;
            last_line = ln + 1;
        }
        Tokens {
            items,
            pos: 0,
            last_line,
        }
    }

    fn peek(&self) -> Option<(usize, usize, &'a str)> {
        self.items.get(self.pos).copied()
    }

    fn next(&mut self, what: &str) -> Result<(usize, usize, &'a str)> {
        match self.items.get(self.pos) {
            Some(&t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(Error::GridParse {
                line: self.last_line,
                col: 1,
                msg: format!("unexpected end of file, expected {what}"),
            }),
        }
    }

    fn next_f64(&mut self, what: &str) -> Result<f64> {
        let (line, col, tok) = self.next(what)?;
        tok.parse::<f64>().map_err(|_| Error::GridParse {
            line,
            col,
            msg: format!("expected {what} (a real), got `{tok}`"),
        })
    }

    fn next_usize(&mut self, what: &str) -> Result<usize> {
        let (line, col, tok) = self.next(what)?;
        tok.parse::<usize>().map_err(|_| Error::GridParse {
            line,
            col,
            msg: format!("expected {what} (a count), got `{tok}`"),
        })
    }
}
