//! Synthetic source trees standing in for proprietary IDE telemetry.
//!
//! A shared library of classes, each with an ordered call protocol, is used
//! by generated projects in both languages, so knowledge of the library
//! transfers across projects and languages. Three kinds of drift are built
//! in:
//!
//! * commit projects form a disjoint partition (their own domain nouns and a
//!   prefixed/abbreviated naming style);
//! * part of the library API was renamed; older files (IDE snapshots and
//!   commits) often still use the legacy names, acceptance logs never do;
//! * LangB projects use snake_case for their own names but share the
//!   library's camelCase API with LangA.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lexer::Language;
use super::source::{Origin, SourceDocument};
use crate::seed::rng_for;

const NOUNS: &[&str] = &[
    "user", "account", "order", "invoice", "profile", "message", "session", "payment", "item",
    "cart", "comment", "post", "photo", "event", "group", "page", "story", "feed", "friend",
    "token", "report", "record", "ticket", "review", "product", "address", "contact", "device",
    "file", "folder", "job", "task", "team", "project", "setting", "channel", "thread", "notice",
    "badge", "coupon", "member", "invite", "upload", "policy",
];
const LIB_SUFFIXES: &[&str] = &[
    "store", "client", "cache", "loader", "builder", "formatter", "validator", "queue", "logger",
    "registry", "mapper", "index",
];
const ROLES: &[&str] = &[
    "controller", "service", "manager", "handler", "view", "helper", "presenter", "worker",
];
const VERBS: &[&str] = &[
    "get", "set", "load", "save", "fetch", "update", "delete", "create", "find", "render",
    "validate", "build", "send", "compute", "parse", "format", "check", "handle", "process",
    "resolve", "apply", "merge", "filter", "sort", "count", "clear", "reset", "open", "close",
    "publish",
];
/// Current verb → the spelling used before the API migration.
const LEGACY: &[(&str, &str)] = &[
    ("fetch", "retrieve"),
    ("load", "read"),
    ("save", "persist"),
    ("delete", "remove"),
    ("update", "modify"),
    ("create", "make"),
    ("find", "lookup"),
    ("send", "dispatch"),
    ("build", "assemble"),
    ("render", "draw"),
    ("validate", "verify"),
    ("process", "execute"),
    ("get", "obtain"),
    ("set", "assign"),
    ("format", "stringify"),
    ("publish", "emit"),
];
const OBJECTS: &[&str] = &[
    "by id", "all", "items", "count", "status", "limit", "filter", "entry", "batch", "config", "key",
    "",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamingStyle {
    /// Full words: `$userStore`, `user_store`.
    Plain,
    /// Member prefix and abbreviated locals: `$mUserStore`, `$usrId`.
    Prefixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub library_classes: usize,
    pub lang_a_projects: usize,
    pub lang_b_projects: usize,
    /// LangA projects whose files all have commit origin.
    pub commit_projects: usize,
    pub files_per_project: usize,
    /// Share of target-project files that are acceptance logs.
    pub accept_share: f64,
    /// Share of library methods renamed by the API migration.
    pub api_drift: f64,
    /// Probability that an older file uses the legacy names.
    pub legacy_share: f64,
}

impl SynthConfig {
    /// Corpus used by the desk-scale transfer experiments.
    pub fn desk(seed: u64) -> Self {
        SynthConfig {
            seed,
            library_classes: 30,
            lang_a_projects: 30,
            lang_b_projects: 16,
            commit_projects: 24,
            files_per_project: 16,
            accept_share: 0.4,
            api_drift: 0.5,
            legacy_share: 0.8,
        }
    }

    /// Small tree bundled with the repository (216 files).
    pub fn sample(seed: u64) -> Self {
        SynthConfig {
            lang_a_projects: 7,
            lang_b_projects: 5,
            commit_projects: 6,
            files_per_project: 12,
            ..Self::desk(seed)
        }
    }
}

type Words = Vec<String>;

fn words(s: &str) -> Words {
    s.split_whitespace().map(str::to_string).collect()
}

fn cap(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_ascii_uppercase().to_string() + c.as_str(),
        None => String::new(),
    }
}

fn camel(w: &[String]) -> String {
    let mut s = w[0].clone();
    for x in &w[1..] {
        s.push_str(&cap(x));
    }
    s
}

fn pascal(w: &[String]) -> String {
    w.iter().map(|x| cap(x)).collect()
}

fn snake(w: &[String]) -> String {
    w.join("_")
}

fn abbreviate(w: &[String]) -> Words {
    w.iter()
        .map(|x| if x.len() > 4 { x[..3].to_string() } else { x.clone() })
        .collect()
}

#[derive(Clone, Debug)]
struct LibMethod {
    verb: String,
    object: Words,
    legacy_verb: Option<String>,
    arity: usize,
    /// Local name for the returned value, if the method returns one.
    yields: Option<Words>,
}

impl LibMethod {
    fn name(&self, legacy: bool) -> String {
        let verb = match (&self.legacy_verb, legacy) {
            (Some(old), true) => old,
            _ => &self.verb,
        };
        let mut w = vec![verb.clone()];
        w.extend(self.object.iter().cloned());
        camel(&w)
    }
}

#[derive(Clone, Debug)]
struct LibClass {
    words: Words,
    /// Methods in protocol order.
    methods: Vec<LibMethod>,
}

#[derive(Clone, Debug)]
struct Library {
    classes: Vec<LibClass>,
}

impl Library {
    fn generate(cfg: &SynthConfig) -> Library {
        let mut rng = rng_for(cfg.seed, "synth/library");
        let mut names = BTreeSet::new();
        let mut classes = Vec::new();
        while classes.len() < cfg.library_classes {
            let noun = *NOUNS.choose(&mut rng).expect("nouns");
            let suffix = *LIB_SUFFIXES.choose(&mut rng).expect("suffixes");
            if !names.insert((noun, suffix)) {
                continue;
            }
            let n_methods = rng.random_range(4..=7);
            let mut verbs: Vec<&str> = VERBS.to_vec();
            verbs.shuffle(&mut rng);
            let methods = verbs[..n_methods]
                .iter()
                .map(|&verb| {
                    let object = match rng.random_range(0..3) {
                        0 => vec![noun.to_string()],
                        _ => words(OBJECTS.choose(&mut rng).expect("objects")),
                    };
                    let legacy_verb = LEGACY
                        .iter()
                        .find(|(cur, _)| *cur == verb)
                        .filter(|_| rng.random_bool(cfg.api_drift))
                        .map(|(_, old)| old.to_string());
                    let yields = rng.random_bool(0.6).then(|| match object.first().map(String::as_str) {
                        Some("all") | Some("items") | Some("batch") => vec![noun.to_string(), "list".to_string()],
                        Some("count") => words("count"),
                        Some("status") => words("status"),
                        Some("config") => words("config"),
                        Some(w) if w == noun => vec![noun.to_string()],
                        _ => words("result"),
                    });
                    LibMethod {
                        verb: verb.to_string(),
                        object,
                        legacy_verb,
                        arity: rng.random_range(0..=2),
                        yields,
                    }
                })
                .collect();
            classes.push(LibClass {
                words: vec![noun.to_string(), suffix.to_string()],
                methods,
            });
        }
        Library { classes }
    }
}

#[derive(Clone, Debug)]
enum Recv {
    This,
    Var(Words),
    Field(Words),
}

#[derive(Clone, Debug)]
enum Callee {
    Lib { class: usize, method: usize },
    Own(usize),
}

#[derive(Clone, Debug)]
enum Expr {
    Var(Words),
    Int(u32),
    Str(String),
    New(usize),
    Call { recv: Recv, callee: Callee, args: Vec<Expr> },
}

#[derive(Clone, Debug)]
enum Stmt {
    Assign(Words, Expr),
    Expr(Expr),
    IfMissing(Words, Vec<Stmt>),
    ForEach(Expr, Words, Vec<Stmt>),
    Return(Option<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum ParamTy {
    Int,
    Str,
    Lib(usize),
}

#[derive(Clone, Debug)]
struct Param {
    name: Words,
    ty: ParamTy,
}

#[derive(Clone, Debug)]
struct MethodDef {
    name: Words,
    params: Vec<Param>,
    returns: bool,
    body: Vec<Stmt>,
}

#[derive(Clone, Debug)]
struct ClassDef {
    name: Words,
    /// (field name, library class)
    fields: Vec<(Words, usize)>,
    methods: Vec<MethodDef>,
    comment: String,
}

struct Project {
    name: String,
    language: Language,
    style: NamingStyle,
    commit: bool,
    nouns: Vec<&'static str>,
    lib_subset: Vec<usize>,
}

struct Gen<'a> {
    lib: &'a Library,
    project: &'a Project,
    rng: ChaCha8Rng,
}

/// A value in scope: name and, for objects, its library class.
type Scoped = (Words, Option<usize>);

impl Gen<'_> {
    fn local(&self, w: Words) -> Words {
        match self.project.style {
            NamingStyle::Plain => w,
            NamingStyle::Prefixed => abbreviate(&w),
        }
    }

    fn field_name(&self, class: usize) -> Words {
        let w = self.lib.classes[class].words.clone();
        match self.project.style {
            NamingStyle::Plain => w,
            NamingStyle::Prefixed => std::iter::once("m".to_string()).chain(w).collect(),
        }
    }

    fn pick_args(&mut self, arity: usize, scope: &[Scoped]) -> Vec<Expr> {
        (0..arity)
            .map(|_| {
                let values: Vec<&Scoped> = scope.iter().filter(|(_, c)| c.is_none()).collect();
                if !values.is_empty() && self.rng.random_bool(0.75) {
                    Expr::Var(values.choose(&mut self.rng).expect("non-empty").0.clone())
                } else if self.rng.random_bool(0.5) {
                    Expr::Int(*[0u32, 1, 10, 50, 100].choose(&mut self.rng).expect("ints"))
                } else {
                    let key = *self.project.nouns.choose(&mut self.rng).expect("nouns");
                    Expr::Str(key.to_string())
                }
            })
            .collect()
    }

    /// Calls following `class`'s protocol on `recv`.
    fn protocol(&mut self, recv: Recv, class: usize, scope: &mut Vec<Scoped>, out: &mut Vec<Stmt>) {
        let methods = &self.lib.classes[class].methods;
        let mut i = if self.rng.random_bool(0.6) {
            0
        } else {
            self.rng.random_range(0..methods.len())
        };
        let steps = self.rng.random_range(1..=3);
        for _ in 0..steps {
            if i >= methods.len() {
                break;
            }
            let m = &self.lib.classes[class].methods[i];
            let args = self.pick_args(m.arity, scope);
            let call = Expr::Call {
                recv: recv.clone(),
                callee: Callee::Lib { class, method: i },
                args,
            };
            match m.yields.clone() {
                Some(y) if self.rng.random_bool(0.7) => {
                    let name = self.local(y);
                    if !scope.iter().any(|(n, _)| *n == name) {
                        scope.push((name.clone(), None));
                    }
                    out.push(Stmt::Assign(name, call));
                }
                _ => out.push(Stmt::Expr(call)),
            }
            i += if self.rng.random_bool(0.2) { 2 } else { 1 };
        }
    }

    fn own_call(&mut self, own: &[MethodDef], current: usize, scope: &mut Vec<Scoped>, out: &mut Vec<Stmt>) {
        let choices: Vec<usize> = (0..own.len()).filter(|&i| i != current).collect();
        let Some(&target) = choices.choose(&mut self.rng) else {
            return;
        };
        let args = self.pick_args(own[target].params.len(), scope);
        let call = Expr::Call {
            recv: Recv::This,
            callee: Callee::Own(target),
            args,
        };
        if own[target].returns && self.rng.random_bool(0.5) {
            let name = self.local(words("result"));
            if !scope.iter().any(|(n, _)| *n == name) {
                scope.push((name.clone(), None));
            }
            out.push(Stmt::Assign(name, call));
        } else {
            out.push(Stmt::Expr(call));
        }
    }

    fn body(&mut self, class: &ClassDef, current: usize) -> Vec<Stmt> {
        let method = &class.methods[current];
        let mut scope: Vec<Scoped> = method
            .params
            .iter()
            .map(|p| (p.name.clone(), if let ParamTy::Lib(c) = p.ty { Some(c) } else { None }))
            .collect();
        let mut out = Vec::new();
        let n = self.rng.random_range(2..=6);
        for _ in 0..n {
            let roll: f64 = self.rng.random();
            let values: Vec<Words> = scope.iter().filter(|(_, c)| c.is_none()).map(|(n, _)| n.clone()).collect();
            if roll < 0.35 && !class.fields.is_empty() {
                let (field, c) = class.fields.choose(&mut self.rng).expect("fields").clone();
                self.protocol(Recv::Field(field), c, &mut scope, &mut out);
            } else if roll < 0.55 {
                let c = *self.project.lib_subset.choose(&mut self.rng).expect("library subset");
                let name = self.local(self.lib.classes[c].words.clone());
                if !scope.iter().any(|(n, _)| *n == name) {
                    out.push(Stmt::Assign(name.clone(), Expr::New(c)));
                    scope.push((name.clone(), Some(c)));
                }
                self.protocol(Recv::Var(name), c, &mut scope, &mut out);
            } else if roll < 0.75 {
                self.own_call(&class.methods, current, &mut scope, &mut out);
            } else if roll < 0.87 && !values.is_empty() {
                let v = values.choose(&mut self.rng).expect("values").clone();
                let ret = if method.returns {
                    Stmt::Return(Some(Expr::Var(v.clone())))
                } else {
                    Stmt::Return(None)
                };
                out.push(Stmt::IfMissing(v, vec![ret]));
            } else if !values.is_empty() {
                let v = values.choose(&mut self.rng).expect("values").clone();
                let item = self.local(words("item"));
                let mut inner_scope = scope.clone();
                inner_scope.push((item.clone(), None));
                let mut inner = Vec::new();
                if self.rng.random_bool(0.5) && !class.fields.is_empty() {
                    let (field, c) = class.fields.choose(&mut self.rng).expect("fields").clone();
                    self.protocol(Recv::Field(field), c, &mut inner_scope, &mut inner);
                } else {
                    self.own_call(&class.methods, current, &mut inner_scope, &mut inner);
                }
                if inner.is_empty() {
                    inner.push(Stmt::Return(None));
                }
                out.push(Stmt::ForEach(Expr::Var(v), item, inner));
            }
        }
        if method.returns {
            let last = scope.iter().rev().find(|(_, c)| c.is_none()).map(|(n, _)| n.clone());
            out.push(Stmt::Return(Some(match last {
                Some(n) => Expr::Var(n),
                None => Expr::Int(0),
            })));
        }
        out
    }

    fn class(&mut self, name: Words, noun: &str) -> ClassDef {
        let n_fields = self.rng.random_range(1..=3);
        let mut subset = self.project.lib_subset.clone();
        subset.shuffle(&mut self.rng);
        let fields: Vec<(Words, usize)> = subset[..n_fields.min(subset.len())]
            .iter()
            .map(|&c| (self.field_name(c), c))
            .collect();
        let n_methods = self.rng.random_range(3..=6);
        let mut seen = BTreeSet::new();
        let mut methods = Vec::new();
        while methods.len() < n_methods {
            let verb = *VERBS.choose(&mut self.rng).expect("verbs");
            let obj = *self.project.nouns.choose(&mut self.rng).expect("nouns");
            let mut name = vec![verb.to_string(), obj.to_string()];
            if self.rng.random_bool(0.2) {
                name.push((*["async", "internal", "batch", "later"].choose(&mut self.rng).expect("suffix")).to_string());
            }
            if !seen.insert(name.clone()) {
                continue;
            }
            let n_params = self.rng.random_range(0..=2);
            let mut params: Vec<Param> = Vec::new();
            for k in 0..n_params {
                let p = match (k, self.rng.random_range(0..4)) {
                    (0, 0..=1) => Param { name: self.local(vec![obj.to_string(), "id".to_string()]), ty: ParamTy::Int },
                    (_, 2) => {
                        let c = *self.project.lib_subset.choose(&mut self.rng).expect("subset");
                        Param { name: self.local(self.lib.classes[c].words.clone()), ty: ParamTy::Lib(c) }
                    }
                    _ => Param { name: self.local(words("name")), ty: ParamTy::Str },
                };
                if !params.iter().any(|q| q.name == p.name) {
                    params.push(p);
                }
            }
            methods.push(MethodDef {
                name,
                params,
                returns: self.rng.random_bool(0.5),
                body: Vec::new(),
            });
        }
        let mut class = ClassDef {
            name,
            fields,
            methods,
            comment: format!("Handles {noun} requests for {}.", self.project.name),
        };
        for i in 0..class.methods.len() {
            let body = self.body(&class, i);
            class.methods[i].body = body;
        }
        class
    }
}

struct Render<'a> {
    lib: &'a Library,
    class: &'a ClassDef,
    language: Language,
    legacy: bool,
    out: String,
}

impl Render<'_> {
    fn own_name(&self, w: &[String]) -> String {
        match self.language {
            Language::LangA => camel(w),
            Language::LangB => snake(w),
        }
    }

    fn var(&self, w: &[String]) -> String {
        match self.language {
            Language::LangA => format!("${}", camel(w)),
            Language::LangB => snake(w),
        }
    }

    fn expr(&self, e: &Expr) -> String {
        match e {
            Expr::Var(w) => self.var(w),
            Expr::Int(i) => i.to_string(),
            Expr::Str(s) => match self.language {
                Language::LangA => format!("\"{s}\""),
                Language::LangB => format!("'{s}'"),
            },
            Expr::New(c) => match self.language {
                Language::LangA => format!("new {}()", pascal(&self.lib.classes[*c].words)),
                Language::LangB => format!("{}()", pascal(&self.lib.classes[*c].words)),
            },
            Expr::Call { recv, callee, args } => {
                let (this, arrow) = match self.language {
                    Language::LangA => ("$this", "->"),
                    Language::LangB => ("self", "."),
                };
                let recv = match recv {
                    Recv::This => this.to_string(),
                    Recv::Var(w) => self.var(w),
                    Recv::Field(w) => format!("{this}{arrow}{}", self.own_name(w)),
                };
                let name = match callee {
                    Callee::Lib { class, method } => self.lib.classes[*class].methods[*method].name(self.legacy),
                    Callee::Own(i) => self.own_name(&self.class.methods[*i].name),
                };
                let args: Vec<String> = args.iter().map(|a| self.expr(a)).collect();
                format!("{recv}{arrow}{name}({})", args.join(", "))
            }
        }
    }

    fn line(&mut self, depth: usize, text: &str) {
        let unit = match self.language {
            Language::LangA => "  ",
            Language::LangB => "    ",
        };
        for _ in 0..depth {
            self.out.push_str(unit);
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn stmts(&mut self, depth: usize, body: &[Stmt]) {
        if body.is_empty() && self.language == Language::LangB {
            self.line(depth, "pass");
        }
        for s in body {
            let a = self.language == Language::LangA;
            match s {
                Stmt::Assign(w, e) => {
                    let t = format!("{} = {}{}", self.var(w), self.expr(e), if a { ";" } else { "" });
                    self.line(depth, &t);
                }
                Stmt::Expr(e) => {
                    let t = format!("{}{}", self.expr(e), if a { ";" } else { "" });
                    self.line(depth, &t);
                }
                Stmt::IfMissing(w, inner) => {
                    let t = if a {
                        format!("if ({} === null) {{", self.var(w))
                    } else {
                        format!("if {} is None:", self.var(w))
                    };
                    self.line(depth, &t);
                    self.stmts(depth + 1, inner);
                    if a {
                        self.line(depth, "}");
                    }
                }
                Stmt::ForEach(iter, item, inner) => {
                    let t = if a {
                        format!("foreach ({} as {}) {{", self.expr(iter), self.var(item))
                    } else {
                        format!("for {} in {}:", self.var(item), self.expr(iter))
                    };
                    self.line(depth, &t);
                    self.stmts(depth + 1, inner);
                    if a {
                        self.line(depth, "}");
                    }
                }
                Stmt::Return(e) => {
                    let t = match (e, a) {
                        (Some(e), true) => format!("return {};", self.expr(e)),
                        (None, true) => "return;".to_string(),
                        (Some(e), false) => format!("return {}", self.expr(e)),
                        (None, false) => "return".to_string(),
                    };
                    self.line(depth, &t);
                }
            }
        }
    }

    fn render(mut self) -> String {
        let c = self.class;
        match self.language {
            Language::LangA => {
                self.line(0, "<?hh // strict");
                self.line(0, &format!("// {}", c.comment));
                self.line(0, "");
                self.line(0, &format!("final class {} {{", pascal(&c.name)));
                for (f, lc) in &c.fields {
                    let t = format!("private {} ${};", pascal(&self.lib.classes[*lc].words), camel(f));
                    self.line(1, &t);
                }
                self.line(0, "");
                let params: Vec<String> = c
                    .fields
                    .iter()
                    .map(|(f, lc)| format!("{} ${}", pascal(&self.lib.classes[*lc].words), camel(f)))
                    .collect();
                self.line(1, &format!("public function __construct({}) {{", params.join(", ")));
                for (f, _) in &c.fields {
                    self.line(2, &format!("$this->{0} = ${0};", camel(f)));
                }
                self.line(1, "}");
                for m in &c.methods {
                    self.line(0, "");
                    let params: Vec<String> = m
                        .params
                        .iter()
                        .map(|p| {
                            let ty = match p.ty {
                                ParamTy::Int => "int".to_string(),
                                ParamTy::Str => "string".to_string(),
                                ParamTy::Lib(lc) => pascal(&self.lib.classes[lc].words),
                            };
                            format!("{ty} ${}", camel(&p.name))
                        })
                        .collect();
                    let ret = if m.returns { "mixed" } else { "void" };
                    let t = format!("public function {}({}): {ret} {{", camel(&m.name), params.join(", "));
                    self.line(1, &t);
                    self.stmts(2, &m.body);
                    self.line(1, "}");
                }
                self.line(0, "}");
            }
            Language::LangB => {
                self.line(0, &format!("# {}", c.comment));
                let imports: BTreeSet<String> = c
                    .fields
                    .iter()
                    .map(|(_, lc)| pascal(&self.lib.classes[*lc].words))
                    .collect();
                if !imports.is_empty() {
                    let list: Vec<String> = imports.into_iter().collect();
                    self.line(0, &format!("from lib import {}", list.join(", ")));
                }
                self.line(0, "");
                self.line(0, "");
                self.line(0, &format!("class {}:", pascal(&c.name)));
                let params: Vec<String> = std::iter::once("self".to_string())
                    .chain(c.fields.iter().map(|(f, _)| snake(f)))
                    .collect();
                self.line(1, &format!("def __init__({}):", params.join(", ")));
                for (f, _) in &c.fields {
                    self.line(2, &format!("self.{0} = {0}", snake(f)));
                }
                if c.fields.is_empty() {
                    self.line(2, "pass");
                }
                for m in &c.methods {
                    self.line(0, "");
                    let params: Vec<String> = std::iter::once("self".to_string())
                        .chain(m.params.iter().map(|p| snake(&p.name)))
                        .collect();
                    self.line(1, &format!("def {}({}):", snake(&m.name), params.join(", ")));
                    self.stmts(2, &m.body);
                }
            }
        }
        self.out
    }
}

/// Generates the whole synthetic tree. Paths look like
/// `{ide|accept|commit}/{lang}/{project}/{Class}.{ext}`.
pub fn generate(cfg: &SynthConfig) -> Vec<SourceDocument> {
    let lib = Library::generate(cfg);
    let mut rng = rng_for(cfg.seed, "synth/projects");
    // commit projects draw their domain from a disjoint half of the nouns
    let half = NOUNS.len() / 2;
    let mut projects = Vec::new();
    let specs = [
        (Language::LangA, cfg.lang_a_projects, false),
        (Language::LangB, cfg.lang_b_projects, false),
        (Language::LangA, cfg.commit_projects, true),
    ];
    for (language, count, commit) in specs {
        for i in 0..count {
            let pool = if commit { &NOUNS[..half] } else { &NOUNS[half..] };
            let mut nouns: Vec<&'static str> = pool.to_vec();
            nouns.shuffle(&mut rng);
            nouns.truncate(rng.random_range(3..=4));
            let mut lib_subset: Vec<usize> = (0..lib.classes.len()).collect();
            lib_subset.shuffle(&mut rng);
            lib_subset.truncate(rng.random_range(6..=10).min(lib.classes.len()));
            let tag = if commit { "c" } else { "p" };
            projects.push(Project {
                name: format!("{tag}{i:02}-{}", nouns[0]),
                language,
                style: if commit { NamingStyle::Prefixed } else { NamingStyle::Plain },
                commit,
                nouns,
                lib_subset,
            });
        }
    }

    let mut docs = Vec::new();
    for project in &projects {
        let mut gen = Gen {
            lib: &lib,
            project,
            rng: rng_for(cfg.seed, &format!("synth/{}/{}", project.language, project.name)),
        };
        let mut names: Vec<Words> = Vec::new();
        for noun in &project.nouns {
            for role in ROLES {
                names.push(vec![noun.to_string(), role.to_string()]);
            }
        }
        names.shuffle(&mut gen.rng);
        names.truncate(cfg.files_per_project);
        for name in names {
            let origin = if project.commit {
                Origin::Commit
            } else if gen.rng.random_bool(cfg.accept_share) {
                Origin::AcceptanceLog
            } else {
                Origin::IdeSnapshot
            };
            let legacy = origin != Origin::AcceptanceLog && gen.rng.random_bool(cfg.legacy_share);
            let class = gen.class(name.clone(), &name[0]);
            let content = Render {
                lib: &lib,
                class: &class,
                language: project.language,
                legacy,
                out: String::new(),
            }
            .render();
            let dir = match origin {
                Origin::IdeSnapshot => "ide",
                Origin::AcceptanceLog => "accept",
                Origin::Commit => "commit",
            };
            let ext = match project.language {
                Language::LangA => "hack",
                Language::LangB => "py",
            };
            let path = format!("{dir}/{}/{}/{}.{ext}", project.language, project.name, pascal(&name));
            let mut doc = SourceDocument::new(path, project.language, origin, content);
            if origin == Origin::IdeSnapshot {
                let len = doc.content.len();
                doc = doc.with_cursor(gen.rng.random_range(0..=len));
            }
            docs.push(doc);
        }
    }
    docs.sort_by(|a, b| a.path.cmp(&b.path));
    docs
}

/// A summary line per origin/language, for logs and the CLI.
pub fn describe(docs: &[SourceDocument]) -> String {
    let mut out = String::new();
    for origin in [Origin::IdeSnapshot, Origin::AcceptanceLog, Origin::Commit] {
        for lang in Language::ALL {
            let sel: Vec<&SourceDocument> = docs.iter().filter(|d| d.origin == origin && d.language == lang).collect();
            if sel.is_empty() {
                continue;
            }
            let bytes: usize = sel.iter().map(|d| d.content.len()).sum();
            let _ = writeln!(out, "{:<15} {:<7} {:>5} files {:>9} bytes", origin.name(), lang.name(), sel.len(), bytes);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::lexer::{detokenize, lex};

    #[test]
    fn deterministic_and_lexable() {
        let cfg = SynthConfig::sample(5);
        let a = generate(&cfg);
        assert_eq!(a, generate(&cfg));
        assert_eq!(a.len(), 216);
        for d in &a {
            d.validate().unwrap();
            let toks = lex(&d.content, d.language).unwrap();
            assert_eq!(detokenize(&toks), d.content);
        }
        let origins: BTreeSet<&str> = a.iter().map(|d| d.origin.name()).collect();
        assert_eq!(origins.len(), 3);
    }

    #[test]
    fn acceptance_logs_never_use_legacy_names() {
        let cfg = SynthConfig::sample(9);
        let lib = Library::generate(&cfg);
        let legacy: BTreeSet<String> = lib
            .classes
            .iter()
            .flat_map(|c| c.methods.iter())
            .filter(|m| m.legacy_verb.is_some())
            .map(|m| m.name(true))
            .collect();
        assert!(!legacy.is_empty());
        let docs = generate(&cfg);
        let uses = |origin: Origin| {
            docs.iter()
                .filter(|d| d.origin == origin)
                .flat_map(|d| lex(&d.content, d.language).unwrap().tokens)
                .filter(|t| legacy.contains(&t.text))
                .count()
        };
        assert_eq!(uses(Origin::AcceptanceLog), 0);
        assert!(uses(Origin::IdeSnapshot) > 0);
    }
}
