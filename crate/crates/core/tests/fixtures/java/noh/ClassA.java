package test.noh;

public class ClassA {
    public void touch() {
    }
}
