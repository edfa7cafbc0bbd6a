//! GF(2^n) arithmetic: products, powers, trace, primitivity and minimal polynomials.

use pngauss::galois::{
    field_pow, is_primitive, minimal_polynomial, poly_mul_mod, trace, validate_characteristic, BinaryPolynomial,
    FieldElement, DEGREE89_TRINOMIAL,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p: BinaryPolynomial = "x^5 + x^2 + 1".parse()?;
    let alpha = FieldElement::generator(&p)?;
    println!("field GF(2^5) from {p} (hex {})", p.to_hex());

    let a3 = field_pow(alpha, 3, &p)?;
    let a4 = poly_mul_mod(a3, alpha, &p)?;
    println!("alpha^3 = {:#07b}, alpha^4 = {:#07b}", a3.value(), a4.value());
    println!("alpha^31 = {} (the multiplicative order is 31)", field_pow(alpha, 31, &p)?.value());

    let traces: Vec<u8> = (0..8).map(|i| trace(field_pow(alpha, i, &p).unwrap(), &p).unwrap() as u8).collect();
    println!("Tr(alpha^i), i = 0..8: {traces:?}");

    println!("{p} primitive: {}", is_primitive(&p)?);
    println!("x^4 + x^2 + 1 primitive: {}", is_primitive(&"x^4 + x^2 + 1".parse()?)?);
    println!("minimal polynomial of alpha^3: {}", minimal_polynomial(a3, &p)?);

    let big: BinaryPolynomial = DEGREE89_TRINOMIAL.parse()?;
    println!("{big}: {:?}", validate_characteristic(&big)?);
    Ok(())
}
