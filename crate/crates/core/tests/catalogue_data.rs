use spinlogic::gadget::{builtin_catalogue, embedded_catalogue, write_catalogue, CATALOGUE_V1};
use spinlogic::Rational;

const REGENERATE: &str = "SPINLOGIC_REGENERATE_CATALOGUE";

#[test]
fn shipped_catalogue_matches_builtin() {
    let text = write_catalogue(&builtin_catalogue::<Rational>());
    if std::env::var_os(REGENERATE).is_some() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/catalogue_v1.txt");
        std::fs::write(path, &text).expect("write catalogue");
        return;
    }
    assert_eq!(CATALOGUE_V1, text, "run with {REGENERATE}=1 to refresh the data file");
    assert_eq!(
        embedded_catalogue::<Rational>().unwrap(),
        builtin_catalogue::<Rational>()
    );
}
