use principal_web::{apply_text, parse_monomial, piece_text, qseries_text};

#[test]
fn monomial_syntaxes_agree() {
    let a = parse_monomial("x(-3)*x(-1)").unwrap();
    let b = parse_monomial("-1 -3").unwrap();
    let c = parse_monomial("x(-1) * x(-3)^1").unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(parse_monomial("x(-2)^2").unwrap().indices(), &[-2, -2]);
    assert!(parse_monomial("y(-1)").is_err());
    assert!(parse_monomial("x(-1)^z").is_err());
}

#[test]
fn qseries_rows() {
    let text = qseries_text(4).unwrap();
    let rows: Vec<Vec<u64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(
        rows,
        vec![
            vec![0, 1, 1, 1, 1],
            vec![1, 1, 1, 0, 0],
            vec![2, 1, 1, 1, 1],
            vec![3, 1, 1, 1, 1],
            vec![4, 2, 2, 1, 1],
        ]
    );
    assert!(qseries_text(-1).is_err());
}

#[test]
fn piece_shows_kernel_generator() {
    let text = piece_text("lambda0", 4, 2).unwrap();
    assert!(text.contains("rank 1, kernel 1, ideal 1"), "{text}");
    assert!(text.contains("kernel: 2*x(-3)*x(-1) + x(-2)^2"), "{text}");
    assert!(text.contains("kernel = ideal"));
    assert!(piece_text("lambda2", 1, 1).is_err());
}

#[test]
fn apply_on_highest_weight_vectors() {
    assert_eq!(apply_text("lambda0", "x(-1)").unwrap(), "x(-1) . v = e{1}");
    assert_eq!(apply_text("lambda1", "x(-1)").unwrap(), "x(-1) . v = 0");
    assert_eq!(apply_text("lambda0", "x(-1)^2").unwrap(), "x(-1)^2 . v = 0");
    assert!(apply_text("lambda1prime", "x(-1)").is_err());
    assert!(apply_text("lambda0", "x(0)").is_err());
    assert!(apply_text("lambda0", "x(-100)").is_err());
}
