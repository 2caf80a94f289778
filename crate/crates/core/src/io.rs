//! Network JSON and rate CSV formats.

use crate::error::{input, Error, Result};
use crate::network::FinancialNetwork;
use crate::rational::{exact_decimal_string, format_rational, parse_rational, to_decimal_string, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Variable name to bank id, as produced by circuit compilation.
pub type VarMap = BTreeMap<String, String>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Number {
    Text(String),
    Int(i64),
}

impl Number {
    fn value(&self) -> Result<Rational> {
        match self {
            Number::Text(s) => parse_rational(s),
            Number::Int(n) => Ok(crate::rational::int(*n)),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BankRecord {
    id: String,
    external_assets: Number,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DebtRecord {
    debtor: String,
    creditor: String,
    notional: Number,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CdsRecord {
    debtor: String,
    creditor: String,
    reference: String,
    notional: Number,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    banks: Vec<BankRecord>,
    #[serde(default)]
    debt: Vec<DebtRecord>,
    #[serde(default)]
    cds: Vec<CdsRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    varmap: Option<VarMap>,
}

/// Parses a network file; the optional `varmap` field is returned alongside.
pub fn network_from_json(text: &str) -> Result<(FinancialNetwork, Option<VarMap>)> {
    let file: NetworkFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("network JSON: {e}")))?;
    let mut b = FinancialNetwork::builder();
    for bank in &file.banks {
        b.bank(&bank.id, bank.external_assets.value()?);
    }
    for d in &file.debt {
        b.debt(&d.debtor, &d.creditor, d.notional.value()?);
    }
    for c in &file.cds {
        b.cds(&c.debtor, &c.creditor, &c.reference, c.notional.value()?);
    }
    let net = b.build()?;
    if let Some(map) = &file.varmap {
        for (var, bank) in map {
            net.index_of(bank)
                .map_err(|_| Error::Input(format!("varmap entry {var:?} names unknown bank {bank:?}")))?;
        }
    }
    Ok((net, file.varmap))
}

/// Canonical JSON: banks, debts and CDSes in lexicographic order, rationals as `p/q`.
pub fn network_to_json(net: &FinancialNetwork, varmap: Option<&VarMap>) -> String {
    let text = |x: &Rational| Number::Text(format_rational(x));
    let file = NetworkFile {
        banks: (0..net.len())
            .map(|i| BankRecord { id: net.id(i).to_string(), external_assets: text(net.external_assets(i)) })
            .collect(),
        debt: net
            .debts()
            .map(|(d, c, v)| DebtRecord {
                debtor: net.id(d).to_string(),
                creditor: net.id(c).to_string(),
                notional: text(v),
            })
            .collect(),
        cds: net
            .cds_contracts()
            .map(|(d, c, r, v)| CdsRecord {
                debtor: net.id(d).to_string(),
                creditor: net.id(c).to_string(),
                reference: net.id(r).to_string(),
                notional: text(v),
            })
            .collect(),
        varmap: varmap.cloned(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("network serializes");
    out.push('\n');
    out
}

/// Reads `bank,rate[,...]` rows; extra columns are ignored. Every bank must appear once.
pub fn rates_from_csv(net: &FinancialNetwork, text: &str) -> Result<Vec<Rational>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Input(format!("rates CSV: {e}")))?.clone();
    if headers.get(0) != Some("bank") || headers.len() < 2 {
        return input("rates CSV must start with a `bank,rate` header");
    }
    let mut rates: Vec<Option<Rational>> = vec![None; net.len()];
    for record in reader.records() {
        let record = record.map_err(|e| Error::Input(format!("rates CSV: {e}")))?;
        let (Some(bank), Some(rate)) = (record.get(0), record.get(1)) else {
            return input("rates CSV row needs a bank and a rate");
        };
        let i = net.index_of(bank)?;
        if rates[i].replace(parse_rational(rate)?).is_some() {
            return input(format!("bank {bank:?} listed twice in rates CSV"));
        }
    }
    let rates = rates
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or_else(|| Error::Input(format!("no rate for bank {:?}", net.id(i)))))
        .collect::<Result<Vec<_>>>()?;
    net.check_rates(&rates)?;
    Ok(rates)
}

/// Exact mode writes `bank,rate,decimal` with the rate as `p/q`; numeric mode
/// writes `bank,rate` with the rate in decimal.
pub fn rates_to_csv(net: &FinancialNetwork, rates: &[Rational], exact: bool) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let row_err = "writing to memory cannot fail";
    if exact {
        writer.write_record(["bank", "rate", "decimal"]).expect(row_err);
    } else {
        writer.write_record(["bank", "rate"]).expect(row_err);
    }
    for (i, r) in rates.iter().enumerate() {
        let decimal = exact_decimal_string(r).unwrap_or_else(|| to_decimal_string(r, 20));
        if exact {
            writer.write_record([net.id(i), &format_rational(r), &decimal]).expect(row_err);
        } else {
            writer.write_record([net.id(i), &decimal]).expect(row_err);
        }
    }
    String::from_utf8(writer.into_inner().expect(row_err)).expect("CSV is UTF-8")
}
