//! Command frames for the pedal and torque emulator, and recovering them
//! from a noisy byte stream.

use canpilot::serial::{
    crc16_ccitt, decode_packet, encode_packet, CommandPacket, CrcVariant, StreamDecoder,
};

fn main() {
    println!("CRC of \"123456789\": {:#06X}", crc16_ccitt(b"123456789"));
    let cmd = CommandPacket::from_percent(10.0, 0.0, 59.5).unwrap();
    let frame = encode_packet(&cmd).unwrap();
    let hex: Vec<String> = frame.iter().map(|b| format!("{b:02X}")).collect();
    println!("frame: {}", hex.join(" "));
    println!("decoded: {:?}", decode_packet(&frame).unwrap());

    let mut corrupt = frame.clone();
    corrupt[4] ^= 0x10;
    println!("flipped bit: {}", decode_packet(&corrupt).unwrap_err());

    // garbage, a good frame, a damaged one, another good one
    let mut stream = vec![0x00, 0x13, 0xFA];
    stream.extend(&frame);
    stream.extend(&corrupt);
    stream.extend(encode_packet(&CommandPacket::new(0.0, 0.2, 0.5).unwrap()).unwrap());
    let mut dec = StreamDecoder::new(CrcVariant::default());
    for (chunk_no, chunk) in stream.chunks(7).enumerate() {
        for r in dec.feed(chunk) {
            match r {
                Ok(p) => println!("chunk {chunk_no}: packet {p:?}"),
                Err(e) => println!("chunk {chunk_no}: dropped ({e})"),
            }
        }
    }
    println!("bytes skipped while resyncing: {}", dec.skipped());
}
