use serde::Serialize;

use fqmoments::lfunc::l_polynomial;

use crate::args::{Common, TableArgs};
use crate::output::{emit, Header};
use crate::Failure;

#[derive(Serialize)]
struct Row {
    index: usize,
    /// exponents against the generators, space separated
    kappa: String,
    parity: String,
    conductor: String,
    primitive: bool,
    /// c_0 … c_{deg R − 1} of L(u, χ), "re+im i" separated by spaces
    coefficients: String,
    l_half_re: Option<f64>,
    l_half_im: Option<f64>,
    l_half_sq: Option<f64>,
}

pub fn run(common: &Common, args: &TableArgs) -> Result<(), Failure> {
    let r = common.parse_poly(&args.modulus)?;
    let engine = common.engine();
    let group = engine.group(&r)?;
    let mut rows = Vec::with_capacity(group.len());
    for (index, chi) in group.characters().enumerate() {
        let chi = chi?;
        let (coefficients, l) = if chi.is_principal() {
            (String::new(), None)
        } else {
            let lp = l_polynomial(&chi)?;
            let cs: Vec<String> = lp
                .coeffs
                .iter()
                .map(|c| format!("{:.12}{:+.12}i", c.re, c.im))
                .collect();
            (cs.join(" "), Some(lp.central_value()))
        };
        rows.push(Row {
            index,
            kappa: chi.kappa().iter().map(u32::to_string).collect::<Vec<_>>().join(" "),
            parity: chi.parity().to_string(),
            conductor: chi.conductor().to_digits(),
            primitive: chi.is_primitive(),
            coefficients,
            l_half_re: l.map(|v| v.l_half.re),
            l_half_im: l.map(|v| v.l_half.im),
            l_half_sq: l.map(|v| v.l_half_sq),
        });
    }
    let table = group.table();
    let mut header = Header::new("char-table", common);
    header
        .add("modulus", r.to_digits())
        .add("modulus (text)", &r)
        .add(
            "generators",
            table
                .generators()
                .iter()
                .map(|g| g.to_digits())
                .collect::<Vec<_>>()
                .join(" "),
        )
        .add(
            "orders",
            table.orders().iter().map(u32::to_string).collect::<Vec<_>>().join(" "),
        );
    emit(common, &header, &rows, &[])
}
