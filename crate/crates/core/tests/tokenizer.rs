use xfer_core::corpus::{Dataset, DatasetItem, DatasetRole, Language, TokenSequence};
use xfer_core::Error;
use xfer_core::tokenizer::{
    bigram_encode, build_vocab, decode, decode_pair, encode_identifier, encode_sequence, placeholder, split_identifier,
    CopyMap, Vocabulary, END_OF_TOKEN,
};

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn corpus(seqs: &[&[&str]]) -> Dataset {
    let items = seqs
        .iter()
        .enumerate()
        .map(|(i, s)| {
            DatasetItem::Sequence(TokenSequence {
                id: format!("s{i}"),
                language: Language::LangB,
                tokens: strings(s),
            })
        })
        .collect();
    Dataset::new(DatasetRole::Ide, items)
}

/// Reference splitter: try every cut of the partial list and keep the one
/// whose first half is longest without exceeding the second by more than one.
fn brute_force_halves(partials: &[String]) -> (String, String) {
    (1..partials.len())
        .filter(|&k| k >= partials.len() - k && k - (partials.len() - k) <= 1)
        .map(|k| (partials[..k].concat(), partials[k..].concat()))
        .next()
        .unwrap()
}

#[test]
fn splitting_examples() {
    assert_eq!(split_identifier("fooBarBazQuux").unwrap(), ["foo", "Bar", "Baz", "Quux"]);
    assert_eq!(split_identifier("x").unwrap(), ["x"]);
    assert_eq!(split_identifier("foo_bar_baz").unwrap(), ["foo", "bar", "baz"]);
    assert!(matches!(split_identifier(""), Err(Error::EmptyIdentifier)));
}

#[test]
fn bigram_examples() {
    let never = |_: &str| false;
    assert_eq!(bigram_encode("fooBarBazQuux", never).unwrap().pair(), ("fooBar", "BazQuux"));
    assert_eq!(bigram_encode("fooBarBaz", never).unwrap().pair(), ("fooBar", "Baz"));
    assert_eq!(bigram_encode("fooBar", |t| t == "fooBar").unwrap().pair(), ("fooBar", END_OF_TOKEN));
    for tok in ["fooBarBaz", "parseHTTP2Response", "a_b_c_d_e", "getUserNameById", "xYz"] {
        let partials = split_identifier(tok).unwrap();
        let b = bigram_encode(tok, never).unwrap();
        if partials.len() > 1 {
            assert_eq!((b.first.replace('_', ""), b.second.replace('_', "")), brute_force_halves(&partials), "{tok}");
        }
    }
}

#[test]
fn placeholders_follow_first_occurrence() {
    let vocab = Vocabulary::specials_only();
    let enc = encode_sequence(&strings(&["alphaBeta", "alphaBeta"]), Language::LangB, &vocab).unwrap();
    assert_eq!(enc.ids.len(), 4);
    assert_eq!(enc.ids[..2], enc.ids[2..]);
    assert_eq!(enc.ids[0], vocab.placeholder_id(0).unwrap());
    assert_eq!(enc.var_map.get(0), Some("alpha"));

    let enc = encode_sequence(&strings(&["oneTwo", "(", "threeFour"]), Language::LangB, &vocab).unwrap();
    let slots: Vec<&str> = enc.var_map.slots().iter().map(String::as_str).collect();
    assert_eq!(slots, ["one", "Two", "three", "Four"]);
    assert_eq!(vocab.token(enc.ids[0]), Some(placeholder(0).as_str()));
    assert_eq!(vocab.token(enc.ids[3]), Some(placeholder(2).as_str()));
    assert_eq!(decode(&enc, &vocab).unwrap(), ["oneTwo", "<unk>", "threeFour"]);
}

#[test]
fn decoding_examples() {
    let vocab = build_vocab(&[&corpus(&[&["fooBarBazQuux", "fooBarBazQuux"], &["fooBarBazQuux"]])], 2);
    let mut copy = CopyMap::new();
    let (b, ids) = encode_identifier("fooBarBazQuux", &vocab, &mut copy).unwrap();
    assert!(copy.is_empty());
    assert_eq!(decode_pair(ids, b.join, &vocab, &copy).unwrap(), "fooBarBazQuux");

    let (b, ids) = encode_identifier("fooBar_baz", &vocab, &mut copy).unwrap();
    assert_eq!(decode_pair(ids, b.join, &vocab, &copy).unwrap(), "fooBar_baz");
    let missing = [vocab.placeholder_id(7).unwrap(), Vocabulary::END_ID];
    assert!(matches!(decode_pair(missing, 0, &vocab, &copy), Err(Error::MissingPlaceholder(7))));
}

#[test]
fn vocabulary_construction() {
    let a = corpus(&[&["alpha", "beta", "alpha"], &["gammaRay", "alpha", "beta"]]);
    let b = corpus(&[&["beta", "delta", "delta"]]);
    let va = build_vocab(&[&a], 2);
    let vb = build_vocab(&[&b], 2);
    assert!(va.contains("alpha") && va.contains("beta"));
    // gammaRay appears once, one short of the cutoff
    assert!(!va.contains("gammaRay") && !va.contains("gamma"));
    let u = va.union(&vb);
    assert!(u.len() - u.n_specials() <= (va.len() - va.n_specials()) + (vb.len() - vb.n_specials()));
    for (s, _) in va.entries().iter().chain(vb.entries()) {
        assert!(u.contains(s), "{s}");
    }
    assert_eq!(build_vocab(&[&a], 2).to_tsv(), va.to_tsv());
    assert_eq!(build_vocab(&[], 2).len(), Vocabulary::specials_only().len());
}
