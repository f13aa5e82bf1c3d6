//! C ABI over the dialforge pipeline.
//!
//! Corpora cross the boundary as opaque `DfCorpus` handles. Every fallible
//! call returns a `DfStatus`; on failure `df_last_error` holds a message for
//! the calling thread until its next failing call. Strings returned through
//! out-parameters are owned by the caller and released with
//! `df_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dialforge::composer::{compose, RegimeSpec, TrainingVariant};
use dialforge::corpus::{read_corpus, write_corpus, Corpus, Kind, Lang, SummaryPair};
use dialforge::extractiveness::{corpus_extractiveness, extractive_fragments, shared_ngram_count};
use dialforge::rouge::{rouge_all, RougeScore};
use dialforge::segmenter::SegmenterConfig;
use dialforge::transforms::{TransformSpec, Transformer};
use dialforge::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Io = 4,
    Parse = 5,
    EmptyInput = 6,
    Mismatch = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfLang {
    En = 0,
    Ko = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfKind {
    Document = 0,
    Dialogue = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DfRougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DfRouge {
    pub rouge1: DfRougeScore,
    pub rouge2: DfRougeScore,
    pub rouge_l: DfRougeScore,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DfTransformReport {
    pub input_pairs: usize,
    pub output_pairs: usize,
    pub omitted: usize,
    pub omit_skipped_single_sentence: usize,
    pub omit_skipped_zero_overlap: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DfExtractivenessSummary {
    pub pairs: usize,
    pub mean_density: f64,
    pub median_density: f64,
    pub mean_coverage: f64,
    pub median_coverage: f64,
}

/// Opaque corpus handle.
pub struct DfCorpus {
    inner: Corpus,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
}

struct Failure(DfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io { .. } => DfStatus::Io,
            Error::Record { .. } | Error::DuplicateId { .. } => DfStatus::Parse,
            Error::EmptyCorpus(_) | Error::EmptyInput(_) => DfStatus::EmptyInput,
            Error::LanguageMismatch { .. } | Error::IdMismatch(_) => DfStatus::Mismatch,
            _ => DfStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> DfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => DfStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            DfStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(DfStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(DfStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn corpus_arg<'a>(p: *const DfCorpus, what: &str) -> Result<&'a Corpus, Failure> {
    p.as_ref()
        .map(|c| &c.inner)
        .ok_or_else(|| Failure(DfStatus::NullPointer, format!("{what} is null")))
}

fn out_arg<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(DfStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn lang_of(lang: DfLang) -> Lang {
    match lang {
        DfLang::En => Lang::En,
        DfLang::Ko => Lang::Ko,
    }
}

fn kind_of(kind: DfKind) -> Kind {
    match kind {
        DfKind::Document => Kind::Document,
        DfKind::Dialogue => Kind::Dialogue,
    }
}

fn spec_for(variant: &str, seed: u64) -> Result<TransformSpec, Failure> {
    match variant.parse::<TrainingVariant>()? {
        TrainingVariant::Naive => Ok(TransformSpec::naive(seed)),
        TrainingVariant::Transformed(v) => Ok(TransformSpec::for_variant(v, seed)),
        TrainingVariant::Original => Err(Failure(
            DfStatus::InvalidArgument,
            "Original is not a transform".into(),
        )),
    }
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(DfStatus::InvalidArgument, "output contains NUL".into()))
}

fn score(s: RougeScore) -> DfRougeScore {
    DfRougeScore {
        precision: s.precision,
        recall: s.recall,
        f1: s.f1,
    }
}

/// Message for the last failing call on this thread. Never null; owned by
/// the library.
#[no_mangle]
pub extern "C" fn df_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn df_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reads a line-delimited record file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn df_corpus_read(
    path: *const c_char,
    lang: DfLang,
    kind: DfKind,
    out: *mut *mut DfCorpus,
) -> DfStatus {
    guard(|| {
        out_arg(out, "out")?;
        let path = str_arg(path, "path")?;
        let corpus = read_corpus(path, lang_of(lang), kind_of(kind))?;
        *out = Box::into_raw(Box::new(DfCorpus { inner: corpus }));
        Ok(())
    })
}

/// # Safety
/// `corpus` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn df_corpus_write(corpus: *const DfCorpus, path: *const c_char) -> DfStatus {
    guard(|| {
        let corpus = corpus_arg(corpus, "corpus")?;
        let path = str_arg(path, "path")?;
        write_corpus(corpus, path)?;
        Ok(())
    })
}

/// Number of pairs, or 0 for a null handle.
///
/// # Safety
/// `corpus` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn df_corpus_len(corpus: *const DfCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.inner.len())
}

/// # Safety
/// `corpus` must come from this library, or be null. It is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn df_corpus_free(corpus: *mut DfCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Applies a variant (`D`, `S`, `O`, `D+S`, `D+O`, `S+O`, `D+S+O` or
/// `Naive`) to every pair of a document corpus. `report` may be null.
///
/// # Safety
/// Pointers must be valid as documented; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn df_corpus_transform(
    corpus: *const DfCorpus,
    variant: *const c_char,
    seed: u64,
    workers: usize,
    out: *mut *mut DfCorpus,
    report: *mut DfTransformReport,
) -> DfStatus {
    guard(|| {
        out_arg(out, "out")?;
        let corpus = corpus_arg(corpus, "corpus")?;
        let variant = str_arg(variant, "variant")?;
        let spec = spec_for(variant, seed)?;
        let transformer = Transformer::new(SegmenterConfig::for_lang(corpus.lang())).with_workers(workers);
        let name = format!("{}.{}", corpus.name(), variant);
        let (transformed, r) = transformer.transform_corpus(corpus, &spec, name)?;
        if let Some(report) = report.as_mut() {
            *report = DfTransformReport {
                input_pairs: r.input_pairs,
                output_pairs: r.output_pairs,
                omitted: r.omitted,
                omit_skipped_single_sentence: r.omit_skipped_single_sentence,
                omit_skipped_zero_overlap: r.omit_skipped_zero_overlap,
            };
        }
        *out = Box::into_raw(Box::new(DfCorpus { inner: transformed }));
        Ok(())
    })
}

/// Builds a training mix. `regime` is `zero`, `few` or `full`; `k` is read
/// only for `few`. `variant` labels the document data (`Original` keeps the
/// dialogue data alone).
///
/// # Safety
/// Pointers must be valid as documented; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn df_compose(
    newdocset: *const DfCorpus,
    dialset: *const DfCorpus,
    regime: *const c_char,
    k: usize,
    seed: u64,
    variant: *const c_char,
    out: *mut *mut DfCorpus,
) -> DfStatus {
    guard(|| {
        out_arg(out, "out")?;
        let newdocset = corpus_arg(newdocset, "newdocset")?;
        let dialset = corpus_arg(dialset, "dialset")?;
        let regime: dialforge::Regime = str_arg(regime, "regime")?.parse()?;
        let variant: TrainingVariant = str_arg(variant, "variant")?.parse()?;
        let k = (regime == dialforge::Regime::FewShot).then_some(k);
        let spec = RegimeSpec::new(regime, k, seed, variant)?;
        let composed = compose(newdocset, dialset, &spec)?;
        *out = Box::into_raw(Box::new(DfCorpus { inner: composed }));
        Ok(())
    })
}

/// # Safety
/// `corpus` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn df_corpus_extractiveness(
    corpus: *const DfCorpus,
    out: *mut DfExtractivenessSummary,
) -> DfStatus {
    guard(|| {
        out_arg(out, "out")?;
        let corpus = corpus_arg(corpus, "corpus")?;
        let report = corpus_extractiveness(corpus)?;
        *out = DfExtractivenessSummary {
            pairs: report.pairs.len(),
            mean_density: report.density.mean,
            median_density: report.density.median,
            mean_coverage: report.coverage.mean,
            median_coverage: report.coverage.median,
        };
        Ok(())
    })
}

/// Transforms one document. The result is written to `*out` and must be
/// released with `df_string_free`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn df_transform_text(
    id: *const c_char,
    text: *const c_char,
    summary: *const c_char,
    lang: DfLang,
    variant: *const c_char,
    seed: u64,
    out: *mut *mut c_char,
) -> DfStatus {
    guard(|| {
        out_arg(out, "out")?;
        let lang = lang_of(lang);
        let pair = SummaryPair::new(
            str_arg(id, "id")?,
            str_arg(text, "text")?,
            str_arg(summary, "summary")?,
            lang,
            Kind::Document,
        );
        let spec = spec_for(str_arg(variant, "variant")?, seed)?;
        let (transformed, _) = Transformer::new(SegmenterConfig::for_lang(lang)).apply(&pair, &spec)?;
        *out = to_c_string(transformed.text)?;
        Ok(())
    })
}

/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn df_rouge(
    candidate: *const c_char,
    reference: *const c_char,
    out: *mut DfRouge,
) -> DfStatus {
    guard(|| {
        out_arg(out, "out")?;
        let triple = rouge_all(str_arg(candidate, "candidate")?, str_arg(reference, "reference")?)?;
        *out = DfRouge {
            rouge1: score(triple.rouge1),
            rouge2: score(triple.rouge2),
            rouge_l: score(triple.rouge_l),
        };
        Ok(())
    })
}

/// Extractive fragment density and coverage of `summary` against `source`.
///
/// # Safety
/// String arguments must be NUL-terminated; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn df_extractiveness(
    summary: *const c_char,
    source: *const c_char,
    out_density: *mut f64,
    out_coverage: *mut f64,
) -> DfStatus {
    guard(|| {
        out_arg(out_density, "out_density")?;
        out_arg(out_coverage, "out_coverage")?;
        let fragments = extractive_fragments(str_arg(summary, "summary")?, str_arg(source, "source")?)?;
        *out_density = fragments.density();
        *out_coverage = fragments.coverage();
        Ok(())
    })
}

/// Distinct character n-grams shared by `a` and `b`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn df_shared_ngram_count(
    a: *const c_char,
    b: *const c_char,
    n: usize,
    out: *mut usize,
) -> DfStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = shared_ngram_count(str_arg(a, "a")?, str_arg(b, "b")?, n)?;
        Ok(())
    })
}
