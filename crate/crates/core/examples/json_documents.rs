use qcond::io::Document;
use qcond::scenarios::random;
use qcond::AlgebraShape;

fn main() -> qcond::Result<()> {
    let mut rng = random::rng_from_seed(1);
    let ch = random::random_channel(&AlgebraShape::classical(2), &AlgebraShape::irreducible(2), 2, &mut rng)?;
    let doc = Document::from(ch);
    let text = doc.to_json();
    println!("{text}");

    let parsed = Document::parse(&text)?;
    println!("round trip exact: {}", parsed == doc && parsed.to_json() == text);

    let bad = r#"{"kind": "state", "shape": [2], "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.4, 0]]]}"#;
    if let Err(e) = Document::parse(bad) {
        println!("rejected: {e}");
    }
    Ok(())
}
