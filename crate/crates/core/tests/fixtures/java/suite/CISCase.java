package test.suite;

public class CISCase {
    private int hits;

    public int count() {
        hits++;
        return hits;
    }
}
