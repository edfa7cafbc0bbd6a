//! Packed-bit and text export of a sequence, and reading both back.

use pngauss::galois::BinaryPolynomial;
use pngauss::lfsr::LfsrState;
use pngauss::sequences::io::{read_csv, read_packed, write_csv, write_packed};
use pngauss::sequences::m_sequence;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p: BinaryPolynomial = "x^7 + x + 1".parse()?;
    let s = m_sequence(&p, &LfsrState::default_seed(&p), 127)?;

    let mut packed = Vec::new();
    write_packed(&s, &mut packed)?;
    println!("packed: {} bytes, header {:02x?}", packed.len(), &packed[..24]);
    let back = read_packed(packed.as_slice())?;
    println!("packed round trip equal: {}", back.bits() == s.bits());

    let mut text = Vec::new();
    write_csv(&s, &mut text)?;
    let back = read_csv(text.as_slice())?;
    println!("text: {} lines, round trip equal: {}", text.iter().filter(|&&b| b == b'\n').count(), back.symbols() == s.symbols());
    Ok(())
}
