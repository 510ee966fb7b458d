use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use satrl_core::{read_dimacs, write_dimacs, CnfFormula};
use satrl_logic::translate::DEFAULT_TIMEOUT;
use satrl_logic::{
    compile_document, compile_expressions, parse_expression_file, HttpTranslator, StubTranslator,
    TranslatorClient,
};

use crate::args::{ConvertArgs, InputMode, TranslatorSpec};
use crate::{sibling_path, CmdResult, Failure};

pub fn read_cnf(path: &Path) -> anyhow::Result<CnfFormula> {
    let file = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_dimacs(file).with_context(|| format!("{}", path.display()))
}

fn read_input(path: Option<&Path>) -> anyhow::Result<String> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("cannot read standard input")?;
            Ok(s)
        }
    }
}

fn translator(a: &ConvertArgs) -> Result<Box<dyn TranslatorClient>, Failure> {
    match &a.translator {
        None => Err(Failure::usage(anyhow!("english mode needs --translator stub:FILE or --translator http"))),
        Some(TranslatorSpec::Stub(path)) => Ok(Box::new(
            StubTranslator::from_file(path).with_context(|| format!("fixture {}", path.display()))?,
        )),
        Some(TranslatorSpec::Http) => {
            let endpoint = a
                .endpoint
                .clone()
                .ok_or_else(|| Failure::usage(anyhow!("--translator http needs --endpoint")))?;
            Ok(Box::new(HttpTranslator::from_env(endpoint, a.model.clone(), DEFAULT_TIMEOUT)))
        }
    }
}

pub fn run(a: &ConvertArgs) -> CmdResult {
    let client = match a.mode {
        InputMode::English => Some(translator(a)?),
        InputMode::Expr => None,
    };
    let text = read_input(a.input.as_deref())?;
    if text.trim().is_empty() {
        return Err(anyhow!("EmptyInput: nothing to convert").into());
    }
    let doc = match client {
        Some(c) => compile_document(&text, c.as_ref())?,
        None => compile_expressions(parse_expression_file(&text)?)?,
    };
    let cnf = if a.no_simplify { &doc.raw_cnf } else { &doc.cnf };

    let mut map = String::new();
    for (index, atom) in doc.symbols.iter() {
        map += &format!("{atom}\t{index}\t{}\n", doc.phrase(atom).unwrap_or(""));
    }
    let dimacs = write_dimacs(cnf);
    let symbols_path: Option<PathBuf> = a.symbols.clone().or_else(|| {
        a.out.as_ref().map(|o| sibling_path(o, ".symbols.tsv"))
    });
    match &a.out {
        Some(out) => fs::write(out, &dimacs).with_context(|| format!("cannot write {}", out.display()))?,
        None => {
            if symbols_path.is_none() {
                for line in map.lines() {
                    println!("c {line}");
                }
            }
            print!("{dimacs}");
        }
    }
    if let Some(p) = symbols_path {
        fs::write(&p, &map).with_context(|| format!("cannot write {}", p.display()))?;
    }
    log::info!(
        "{} sentence(s), {} atom(s), {} clause(s) ({} before simplification)",
        doc.sentences.len(),
        doc.symbols.len(),
        doc.cnf.num_clauses(),
        doc.raw_cnf.num_clauses()
    );
    Ok(0)
}
